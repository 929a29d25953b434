from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from liouville.errors import (
    BadEnclosure,
    DependentRadicands,
    DivisionByZeroScalar,
    DuplicateSymbol,
    FieldError,
    FieldMismatch,
    InsufficientPrecision,
    NonSquarefreeRadicand,
    ScalarSyntaxError,
    UnknownToken,
)
from liouville.scalar import (
    QQ_FIELD,
    FieldDescriptor,
    Interval,
    make_field,
    parse_enclosure,
    parse_scalar,
)

PI = "3.14159265358979323846264338327950288"


@pytest.fixture
def K():
    return make_field(FieldDescriptor("multi-quadratic", (2, 3)))


@pytest.fixture
def T():
    return make_field(FieldDescriptor("transcendental", (), (("pi", PI),)))


def test_rational_basics():
    a = QQ_FIELD.scalar("1/2 + 1/3")
    assert a == Fraction(5, 6)
    assert str(a) == "5/6"
    assert a.rational_content() == Fraction(5, 6)
    assert a.sign() == 1 and (-a).sign() == -1 and QQ_FIELD.zero().sign() == 0


def test_multiquadratic_basis(K):
    assert K.basis_labels == ["1", "sqrt2", "sqrt3", "sqrt6"]
    assert K.scalar("sqrt2*sqrt3 - sqrt6").is_zero()
    assert K.scalar("sqrt2") * K.scalar("sqrt2") == 2
    assert K.scalar("sqrt6 * sqrt2") == K.scalar("2*sqrt3")


def test_inverse(K):
    a = K.scalar("1 + sqrt2 + sqrt3")
    assert a * (1 / a) == 1
    assert str(1 / K.scalar("sqrt2 + sqrt3")) == "-sqrt2 + sqrt3"


def test_sign_of_near_cancellation(K):
    # sqrt2 + sqrt3 - sqrt6 - 1 is about -0.3032
    a = K.scalar("sqrt2 + sqrt3 - sqrt6 - 1")
    assert a.sign() == -1
    assert abs(float(a) + 0.30322) < 1e-4


def test_enclosure_contains_value(K):
    a = K.scalar("sqrt2 + sqrt3")
    iv = a.enclosure(64)
    with localcontext() as ctx:
        ctx.prec = 60
        ref = Fraction(Decimal(2).sqrt() + Decimal(3).sqrt())
    assert iv.lo <= ref <= iv.hi
    assert iv.width < Fraction(1, 2**60)


def test_format_round_trips(K):
    for text in ["sqrt6/2", "-3 + 2*sqrt2 - sqrt3/7", "0", "sqrt1"]:
        a = K.scalar(text)
        assert K.scalar(str(a)) == a


def test_rational_content(K):
    assert K.scalar("6/4").rational_content() == Fraction(3, 2)
    assert K.scalar("sqrt2").rational_content() is None


def test_bad_fields():
    with pytest.raises(NonSquarefreeRadicand):
        make_field(FieldDescriptor("multi-quadratic", (4,)))
    with pytest.raises(DependentRadicands):
        make_field(FieldDescriptor("multi-quadratic", (2, 3, 6)))
    with pytest.raises(DuplicateSymbol):
        make_field(FieldDescriptor("transcendental", (), (("t", PI), ("t", PI))))
    with pytest.raises(FieldError):
        make_field(FieldDescriptor("tower"))
    with pytest.raises(FieldError):
        make_field(FieldDescriptor("rational", (2,)))


def test_parse_errors(K):
    with pytest.raises(UnknownToken):
        parse_scalar("sqrt5", K)
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("1 +", K)
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("(1", K)
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("2^3", K)
    with pytest.raises(DivisionByZeroScalar):
        parse_scalar("1/(sqrt2*sqrt2 - 2)", K)


def test_field_mismatch(K):
    with pytest.raises(FieldMismatch):
        K.scalar("sqrt2") + QQ_FIELD.scalar(1)


def test_transcendental(T):
    p = T.scalar("pi")
    assert str((p * p - 1) / (p - 1)) == "pi + 1"
    assert (p - 3).sign() == 1
    assert abs(float(p) - 3.141592653589793) < 1e-15
    assert (p / p).rational_content() == 1
    assert any("algebraically independent" in s for s in T.assertions)


def test_transcendental_sign_needs_resolvable_enclosure(T):
    # pi - 314159265358979323846264338327950288/10^35 sits inside the declared enclosure
    p = T.scalar("pi - 314159265358979323846264338327950288/100000000000000000000000000000000000")
    with pytest.raises(InsufficientPrecision):
        p.sign()


def test_parse_enclosure():
    lo, hi = Fraction(1), Fraction(1) + Fraction(1, 10**40)
    assert parse_enclosure(f"[{lo}, {hi}]") == Interval(lo, hi)
    iv = parse_enclosure(PI)
    assert iv.contains(Fraction(314159265358979323846264338327950288, 10**35))
    iv = parse_enclosure("3 +- 1/10^31".replace("1/10^31", "0." + "0" * 30 + "1"))
    assert iv.width == Fraction(2, 10**31)
    with pytest.raises(BadEnclosure):
        parse_enclosure("3.14")  # too wide
    with pytest.raises(BadEnclosure):
        parse_enclosure("abc")
