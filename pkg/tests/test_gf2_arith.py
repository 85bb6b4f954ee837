"""Field arithmetic: construction, operations, and elementary order facts."""

import math
import random

import pytest

from thetamap.gf2_arith import (
    CONWAY_POLY,
    FieldElement,
    FieldError,
    add,
    degree,
    factorize,
    field_from_record,
    field_to_record,
    inv,
    is_irreducible,
    make_field,
    mul,
    order,
    trace,
)

# ---------------------------------------------------------------------------
# Independent schoolbook oracle on coefficient lists


def poly_from_bits(bits):
    return [(bits >> i) & 1 for i in range(bits.bit_length())]


def poly_to_bits(coeffs):
    out = 0
    for i, c in enumerate(coeffs):
        if c:
            out |= 1 << i
    return out


def schoolbook_mulmod(a_bits, b_bits, mod_bits):
    """Convolution mod 2, then long division by the modulus."""
    a, b, m = poly_from_bits(a_bits), poly_from_bits(b_bits), poly_from_bits(mod_bits)
    prod = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] ^= bj
    dm = len(m) - 1
    for k in range(len(prod) - 1, dm - 1, -1):
        if prod[k]:
            for j, mj in enumerate(m):
                prod[k - dm + j] ^= mj
    return poly_to_bits(prod[:dm])


# ---------------------------------------------------------------------------
# Conway table oracle: re-derive small entries from the defining property


def conway_from_definition(t, table):
    div_exps = [d for d in range(1, t) if t % d == 0]
    f = (1 << t) | 1
    while True:
        if (is_irreducible(f) and _primitive_x(f, t)
                and all(_norm_compatible(table[d], d, f, t) for d in div_exps)):
            return f
        f += 2


def _primitive_x(f, t):
    n = (1 << t) - 1
    if _ppow(2, n, f) != 1:
        return False
    for p, _ in factorize(n).primes:
        if _ppow(2, n // p, f) == 1:
            return False
    return True


def _pmod(a, m):
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _ppow(a, e, f):
    r = _pmod(1, f)
    a = _pmod(a, f)
    while e:
        if e & 1:
            r = _pmod_mul(r, a, f)
        a = _pmod_mul(a, a, f)
        e >>= 1
    return r


def _pmod_mul(a, b, f):
    return _pmod(schoolbook_mulmod_raw(a, b), f)


def schoolbook_mulmod_raw(a, b):
    r = 0
    while a:
        if a & 1:
            r ^= b
        a >>= 1
        b <<= 1
    return r


def _norm_compatible(cd, d, f, t):
    e = ((1 << t) - 1) // ((1 << d) - 1)
    pt = _ppow(2, e, f)
    acc = 0
    for i in range(cd.bit_length() - 1, -1, -1):
        acc = _pmod_mul(acc, pt, f)
        if (cd >> i) & 1:
            acc ^= 1
    return acc == 0


def test_conway_table_matches_definition_small():
    derived = {}
    for t in range(1, 11):
        derived[t] = conway_from_definition(t, derived)
        assert derived[t] == CONWAY_POLY[t], f"t={t}"


def test_conway_six_is_the_expected_polynomial():
    # x^6 + x^4 + x^3 + x + 1
    assert make_field(6).modulus == 0b1011011


# ---------------------------------------------------------------------------
# make_field


def test_make_field_one():
    f = make_field(1)
    assert f.q == 2 and f.gen == 1
    assert f.fact_minus.primes == ()


def test_make_field_four_fact_plus():
    assert make_field(4).fact_plus.primes == ((17, 1),)


def test_make_field_rejects_reducible_modulus():
    with pytest.raises(FieldError):
        make_field(4, modulus=0b10001)       # x^4 + 1 = (x+1)^4


def test_make_field_range_cap():
    with pytest.raises(FieldError):
        make_field(0)
    with pytest.raises(FieldError):
        make_field(25)
    assert make_field(25, max_t=25).t == 25


def test_make_field_with_supplied_modulus():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5, so the
    # generator search must land elsewhere
    f = make_field(4, modulus=0b11111)
    assert f.gen != 2
    assert f.order(f.gen) == 15
    with pytest.raises(FieldError):
        make_field(4, modulus=0b1011011)     # degree 6 polynomial


def test_make_field_beyond_conway_uses_least_irreducible():
    f = make_field(17)
    assert f.modulus.bit_length() - 1 == 17
    assert is_irreducible(f.modulus)
    for cand in range((1 << 17) | 1, f.modulus, 2):
        assert not is_irreducible(cand)
    assert f.order(f.gen) == 2 ** 17 - 1


def test_rs_decomposition():
    f = make_field(12)
    assert (f.r, f.s) == (2, 3)
    f = make_field(7)
    assert (f.r, f.s) == (0, 7)


# ---------------------------------------------------------------------------
# element operations


def test_add_identities():
    f = make_field(6)
    a = f.element(0b101011)
    assert add(a, a) == f.zero()
    assert add(a, f.zero()) == a


def test_add_against_schoolbook():
    f = make_field(6)
    a = f.generator()
    b = f.element(f.exp_of(45))
    s = add(a, b)
    assert s.bits == poly_to_bits(
        [x ^ y for x, y in zip(poly_from_bits(a.bits) + [0] * 6,
                               poly_from_bits(b.bits) + [0] * 6)])


def test_mul_identities():
    f = make_field(8)
    a = f.element(0xA7)
    assert mul(a, f.one()) == a
    assert mul(a, f.zero()) == f.zero()


def test_mul_exponent_arithmetic():
    f = make_field(6)
    # dlog oracle built by repeated schoolbook multiplication
    logt = {}
    v = 1
    for i in range(63):
        logt[v] = i
        v = schoolbook_mulmod(v, f.gen, f.modulus)
    for i, j in [(3, 9), (45, 27), (62, 1), (31, 55)]:
        p = mul(f.element(f.exp_of(i)), f.element(f.exp_of(j)))
        assert logt[p.bits] == (i + j) % 63


@pytest.mark.parametrize("t", [1, 2, 3, 6, 8, 12])
def test_mul_against_schoolbook_oracle(t):
    f = make_field(t)
    rng = random.Random(1000 + t)
    for _ in range(10_000):
        a = rng.randrange(f.q)
        b = rng.randrange(f.q)
        assert f.mul(a, b) == schoolbook_mulmod(a, b, f.modulus)


def test_mul_table_and_shiftxor_paths_agree():
    f = make_field(9)
    rng = random.Random(7)
    pairs = [(rng.randrange(f.q), rng.randrange(f.q)) for _ in range(500)]
    plain = [f.mul(a, b) for a, b in pairs]       # before tables exist
    f.ensure_tables()
    assert plain == [f.mul(a, b) for a, b in pairs]


def test_inv():
    f = make_field(6)
    assert inv(f.one()) == f.one()
    alpha = f.generator()
    assert inv(alpha).bits == f.exp_of(62)
    for e in f.units():
        assert inv(inv(e)) == e
        assert mul(e, inv(e)) == f.one()
    with pytest.raises(FieldError):
        inv(f.zero())


def test_trace():
    f2 = make_field(2)
    omega = f2.generator()
    # omega + omega^2 = 1 because omega's minimal polynomial is x^2 + x + 1
    assert trace(omega) == 1
    for t in (1, 2, 3, 4, 5, 6):
        f = make_field(t)
        assert trace(f.zero()) == 0
        assert trace(f.one()) == t % 2
        for e in f.elements():
            frob = sum_of_conjugates(f, e.bits, t)
            assert trace(e) == frob


def sum_of_conjugates(f, a, d):
    acc, v = 0, a
    for _ in range(d):
        acc ^= v
        v = schoolbook_mulmod(v, v, f.modulus)
    assert acc in (0, 1)
    return acc


def test_subfield_trace_contract():
    f = make_field(6)
    omega = f.exp_of(21)                  # order 3, lives in GF(4)
    assert f.subfield_trace(omega, 2) == sum_of_conjugates(f, omega, 2)
    with pytest.raises(FieldError):
        f.subfield_trace(f.gen, 2)        # generator is not in GF(4)
    with pytest.raises(FieldError):
        f.subfield_trace(omega, 4)        # 4 does not divide 6


def test_order():
    f = make_field(6)
    assert order(f.one()) == 1
    assert order(f.generator()) == 63
    assert order(f.element(f.exp_of(21))) == 3     # 63 / gcd(63, 21)
    with pytest.raises(FieldError):
        order(f.zero())
    for e in f.units():                   # order matches brute force
        o = order(e)
        assert f.pow(e.bits, o) == 1
        for p, _ in factorize(o).primes:
            assert f.pow(e.bits, o // p) != 1


def test_degree():
    f = make_field(6)
    assert degree(f.zero()) == 1
    assert degree(f.one()) == 1
    assert degree(f.generator()) == 6
    assert degree(f.element(f.exp_of(21))) == 2    # order 3 divides 2^2 - 1


def test_cross_field_operations_error():
    a = make_field(3).generator()
    b = make_field(4).generator()
    with pytest.raises(FieldError):
        mul(a, b)
    with pytest.raises(FieldError):
        add(a, b)


def test_element_validation():
    f = make_field(3)
    with pytest.raises(FieldError):
        FieldElement(f, 8)
    with pytest.raises(FieldError):
        FieldElement(f, -1)


# ---------------------------------------------------------------------------
# factorization


def test_factorize_examples():
    assert factorize(1).primes == ()
    assert factorize(65).primes == ((5, 1), (13, 1))
    assert factorize(2 ** 16 + 1).primes == ((65537, 1),)


def test_factorize_reconstructs_and_sorts():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randrange(1, 10 ** 12)
        fac = factorize(n)
        prod = 1
        for p, e in fac.primes:
            prod *= p ** e
        assert prod == n
    big = factorize((2 ** 31 - 1) * (2 ** 31 - 1))   # square of a large prime
    assert big.primes == ((2 ** 31 - 1, 2),)


def test_factorize_range():
    with pytest.raises(FieldError):
        factorize(0)
    with pytest.raises(FieldError):
        factorize(1 << 64)


def test_divisors():
    assert factorize(60).divisors() == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]


# ---------------------------------------------------------------------------
# elementary order and divisor facts


def test_gcd_of_group_orders_coprime():
    for t in range(1, 21):
        assert math.gcd(2 ** t - 1, 2 ** t + 1) == 1
        assert math.gcd(2 ** t + 1, 2 ** (2 * t) + 1) == 1


def test_coprime_orders_multiply():
    f = make_field(12)
    rng = random.Random(99)
    divs = factorize(f.q - 1).divisors()
    for _ in range(300):
        d1 = rng.choice(divs)
        d2 = rng.choice(divs)
        if math.gcd(d1, d2) != 1:
            continue
        g1 = f.pow(f.gen, (f.q - 1) // d1)
        g2 = f.pow(f.gen, (f.q - 1) // d2)
        assert f.order(g1) == d1 and f.order(g2) == d2
        assert f.order(f.mul(g1, g2)) == d1 * d2


@pytest.mark.parametrize("t", range(1, 13))
def test_no_unit_order_divides_q_plus_one(t):
    # beyond 0 and 1, no element's order divides 2^t + 1
    f = make_field(t)
    for bits in range(2, f.q):
        assert (f.q + 1) % f.order(bits) != 0


def test_divisors_of_generalized_fermat_numbers():
    for t in range(1, 21):
        r = 0
        tt = t
        while tt % 2 == 0:
            r += 1
            tt //= 2
        for d in factorize(2 ** t + 1).divisors():
            assert d % (1 << (r + 1)) == 1, (t, d)


@pytest.mark.parametrize("t", range(1, 13))
def test_degree_after_map_is_t_or_half(t):
    f = make_field(t)
    for bits in range(1, f.q):
        if f.degree(bits) != t:
            continue
        b = bits ^ f.inv(bits)
        db = 1 if b == 0 else f.degree(b)
        if b == 0:
            continue                      # only x = 1, which has degree 1
        assert db in {t, t // 2} if t % 2 == 0 else db == t


# ---------------------------------------------------------------------------
# serialization


def test_record_roundtrip():
    f = make_field(6)
    rec = field_to_record(f)
    assert rec == "t=6 modulus=5b generator=2"
    g = field_from_record(rec)
    assert (g.t, g.modulus, g.gen) == (f.t, f.modulus, f.gen)
    assert g.compatible(f)


def test_record_rejects_garbage():
    with pytest.raises(FieldError):
        field_from_record("t=6 modulus=zz generator=2")
    with pytest.raises(FieldError):
        field_from_record("nonsense")
    with pytest.raises(FieldError):
        field_from_record("t=6 modulus=5b generator=3")   # order(3) < 63
