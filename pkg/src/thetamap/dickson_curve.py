"""Dickson polynomials with parameter 1 over GF(2^n), their root sets, and
the Kloosterman / Koblitz-curve counts they are tied to.

D_m is defined by D_0 = 0, D_1 = x, D_k = x*D_(k-1) + D_(k-2) (the signs of
the classical recurrence vanish in characteristic 2) and satisfies
D_m(y + 1/y) = y^m + y^(-m).  For m = q+1 the roots of D_m in GF(q)* are
exactly the in-degree-0 vertices of the map graph over GF(q); splitting
them by whether the inverse is also a root gives the sets

    S_m = { a in GF(q)* : D_m(a) = D_m(1/a) = 0 }
    T_m = { a in GF(q)* : D_m(a) = 0, D_m(1/a) != 0 }

whose sizes the Kloosterman sum K = sum_x (-1)^Tr(x + 1/x) predicts via
|S_(q+1)| = (q + 1 + K) / 4.  The same trace condition Tr(x) = Tr(1/x)
characterizes the x-coordinates of the rational points of the curve
y^2 + xy = x^3 + 1, so its point count cross-validates everything.

The additive character here is the canonical one, x -> (-1)^Tr(x); the
count cross-check validates that normalization at every field size.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from thetamap.gf2_arith import (
    FieldElement,
    FieldError,
    FieldSpec,
    field_to_record,
    make_field,
)
from thetamap.order_dynamics import subfield_embedding
from thetamap.report import CheckReport
from thetamap.theta_graph import ThetaGraph

__all__ = [
    "RootSetReport",
    "dickson_eval",
    "dickson_coeff_bits",
    "dickson_eval_closed_form",
    "root_sets",
    "kloosterman",
    "count_N",
    "curve_point_count",
    "curve_point_count_naive",
    "leaf_set_equalities",
    "root_set_report",
]


def _dickson_bits(spec: FieldSpec, m: int, x: int) -> int:
    """D_m(x) by the linear recurrence, on packed ints."""
    if m < 1:
        raise FieldError(f"Dickson degree m={m} must be positive")
    d0, d1 = 0, x
    for _ in range(m - 1):
        d0, d1 = d1, spec.mul(x, d1) ^ d0
    return d1


def dickson_eval(spec: FieldSpec, m: int, x: FieldElement) -> FieldElement:
    """Value of the degree-m Dickson polynomial of the first kind, parameter 1."""
    if not spec.compatible(x.field):
        raise FieldError("argument does not belong to this field")
    return FieldElement(spec, _dickson_bits(spec, m, x.bits))


def dickson_coeff_bits(m: int) -> int:
    """Coefficient parity vector of D_m from the closed form.

    Bit j is the mod-2 coefficient of x^j in
    sum_i m/(m-i) * C(m-i, i) * (-1)^i * x^(m-2i).
    """
    bits = 0
    for i in range(m // 2 + 1):
        num = m * comb(m - i, i)
        if num % (m - i):
            raise AssertionError("Dickson coefficient is not integral")
        if (num // (m - i)) & 1:
            bits |= 1 << (m - 2 * i)
    return bits


def dickson_eval_closed_form(spec: FieldSpec, m: int, x: FieldElement) -> FieldElement:
    """Closed-form evaluation; the small-degree oracle for the recurrence."""
    if not spec.compatible(x.field):
        raise FieldError("argument does not belong to this field")
    coeffs = dickson_coeff_bits(m)
    acc = 0
    for j in range(m, -1, -1):
        acc = spec.mul(acc, x.bits)
        if (coeffs >> j) & 1:
            acc ^= 1
    return FieldElement(spec, acc)


def _root_bits(spec: FieldSpec, m: int) -> set[int]:
    """All units where D_m vanishes, by direct evaluation over GF(q)*."""
    try:
        spec.ensure_tables()
    except FieldError:
        pass
    roots: set[int] = set()
    if spec._log is not None:
        exp, log = spec._exp, spec._log
        for x in range(1, spec.q):
            lx = log[x]
            d0, d1 = 0, x
            for _ in range(m - 1):
                d0, d1 = d1, (exp[lx + log[d1]] if d1 else 0) ^ d0
            if d1 == 0:
                roots.add(x)
    else:
        for x in range(1, spec.q):
            if _dickson_bits(spec, m, x) == 0:
                roots.add(x)
    return roots


def _split_roots(spec: FieldSpec, roots: set[int]) -> tuple[set[int], set[int]]:
    s = {x for x in roots if spec.inv(x) in roots}
    return s, roots - s


def root_sets(spec: FieldSpec, m: int) -> tuple[set[FieldElement], set[FieldElement]]:
    """(S_m, T_m) by direct evaluation; requires m > 1 and m | q+1.

    For m = q+1 the root set is independently recomputed as the image of
    the nontrivial order-(q+1) subgroup of GF(q^2)* under x -> x + 1/x and
    the two computations are asserted equal: the image is all of S union T,
    and S is its inverse-closed part.
    """
    q = spec.q
    if m <= 1:
        raise FieldError(f"m={m} must exceed 1")
    if (q + 1) % m != 0:
        raise FieldError(f"m={m} does not divide q+1={q + 1}")
    roots = _root_bits(spec, m)
    s, t = _split_roots(spec, roots)
    if m == q + 1:
        image = _theta_image_of_small_subgroup(spec, m)
        if image != roots:
            raise AssertionError("root set disagrees with the subgroup image")
        s_img = {x for x in image if spec.inv(x) in image}
        if s != s_img or t != image - s_img:
            raise AssertionError("S/T split disagrees with the subgroup image")
    return ({FieldElement(spec, x) for x in s},
            {FieldElement(spec, x) for x in t})


def _theta_image_of_small_subgroup(spec: FieldSpec, m: int) -> set[int]:
    """{ y + 1/y : y in GF(q^2)*, |y| divides m, y != 1 }, pulled back to GF(q).

    Enumerated through the ambient field GF(2^(2n)) and mapped back through
    the explicit subfield embedding.
    """
    ambient = make_field(2 * spec.t)
    emb = subfield_embedding(spec, ambient)
    back = {e: x for x, e in enumerate(emb)}
    h = ambient.pow(ambient.gen, (ambient.q - 1) // m)
    image: set[int] = set()
    y = h
    for _ in range(m - 1):                # skips y = 1
        img = y ^ ambient.inv(y)
        back_img = back.get(img)
        if back_img is None:
            raise AssertionError("subgroup image left the base subfield")
        image.add(back_img)
        y = ambient.mul(y, h)
    return image


def kloosterman(spec: FieldSpec) -> int:
    """K = sum over units of (-1)^Tr(x + 1/x), an exact signed integer."""
    try:
        spec.ensure_tables()
    except FieldError:
        pass
    ones = 0
    n_units = spec.q - 1
    if spec._log is not None:
        exp = spec._exp
        for i in range(n_units):
            x = exp[i]
            ones += spec.trace(x ^ exp[n_units - i])
    else:
        fwd, bwd = 1, 1
        g, ginv = spec.gen, spec.inv(spec.gen)
        for _ in range(n_units):
            ones += spec.trace(fwd ^ bwd)
            fwd = spec.mul(fwd, g)
            bwd = spec.mul(bwd, ginv)
    k = (n_units - ones) - ones
    if k * k > 4 * spec.q:
        raise AssertionError(f"Weil bound violated: K={k}, q={spec.q}")
    return k


def count_N(spec: FieldSpec) -> tuple[int, bool]:
    """(q + 1 + K)/4, and whether it equals |S_(q+1)| by direct evaluation."""
    q = spec.q
    k = kloosterman(spec)
    if (q + 1 + k) % 4:
        raise AssertionError(f"4 does not divide q+1+K = {q + 1 + k}")
    n_pred = (q + 1 + k) // 4
    s, _ = _split_roots(spec, _root_bits(spec, q + 1))
    return n_pred, n_pred == len(s)


def curve_point_count(spec: FieldSpec) -> int:
    """|E(GF(q))| for y^2 + xy = x^3 + 1 via the x-coordinate criterion.

    Two points per unit x with Tr(x) = Tr(1/x), one point (0, 1), one point
    at infinity.  Checks the Hasse bound exactly in integers.
    """
    admissible = 0
    fwd, bwd = 1, 1
    g, ginv = spec.gen, spec.inv(spec.gen)
    for _ in range(spec.q - 1):
        if spec.trace(fwd) == spec.trace(bwd):
            admissible += 1
        fwd = spec.mul(fwd, g)
        bwd = spec.mul(bwd, ginv)
    count = 2 * admissible + 2
    if (count - (spec.q + 1)) ** 2 > 4 * spec.q:
        raise AssertionError(f"Hasse bound violated: |E|={count}, q={spec.q}")
    if admissible != (count - 2) // 2:
        raise AssertionError("A-quadrant size identity failed")
    return count


def curve_point_count_naive(spec: FieldSpec) -> int:
    """Brute-force oracle: try every (x, y) pair, plus the point at infinity."""
    count = 1
    for x in range(spec.q):
        x3_1 = spec.mul(spec.mul(x, x), x) ^ 1
        for y in range(spec.q):
            if spec.mul(y, y) ^ spec.mul(x, y) == x3_1:
                count += 1
    return count


def leaf_set_equalities(spec: FieldSpec, g: ThetaGraph) -> CheckReport:
    """S_(q+1) versus the A-class leaves and T_(q+1) versus the B-class ones."""
    if not spec.compatible(g.field):
        raise FieldError("graph was built over a different field")
    n = spec.t
    rep = CheckReport(f"leaf sets versus Dickson root sets (n={n})")
    roots = _root_bits(spec, spec.q + 1)
    s, t = _split_roots(spec, roots)
    a_leaves: set[int] = set()
    b_leaves: set[int] = set()
    for v in range(spec.q):              # infinity is never a leaf
        if not g.pred[v]:
            cls = g.components[g.comp_id[v]].trace_class
            (a_leaves if cls == "A" else b_leaves).add(v)
    rep.add("s-equals-a-leaves", s == a_leaves,
            f"|S|={len(s)} |A-leaves|={len(a_leaves)}")
    rep.add("t-equals-b-leaves", t == b_leaves,
            f"|T|={len(t)} |B-leaves|={len(b_leaves)}")
    if n > 2:
        rep.add("t-nonempty", bool(t), f"|T|={len(t)}")
    else:
        rep.add("t-empty-small-field", not t, f"|T|={len(t)}")
    return rep


@dataclass
class RootSetReport:
    """Everything about D_(q+1) over one field, cross-validated."""

    q: int
    m: int
    S: frozenset[int]
    T: frozenset[int]
    K: int
    N_pred: int
    E_count: int

    def to_dict(self) -> dict:
        return {
            "n": self.q.bit_length() - 1, "q": self.q, "m": self.m,
            "K": self.K, "N_pred": self.N_pred,
            "S_size": len(self.S), "T_size": len(self.T),
            "E_count": self.E_count,
        }


def root_set_report(spec: FieldSpec, m: int | None = None) -> RootSetReport:
    """Build the report for degree m (default q+1) and assert its invariants."""
    q = spec.q
    if m is None:
        m = q + 1
    s_elems, t_elems = root_sets(spec, m)
    s = frozenset(e.bits for e in s_elems)
    t = frozenset(e.bits for e in t_elems)
    k = kloosterman(spec)
    n_pred = (q + 1 + k) // 4
    if (q + 1 + k) % 4:
        raise AssertionError(f"4 does not divide q+1+K = {q + 1 + k}")
    if s & t:
        raise AssertionError("S and T intersect")
    if any(spec.inv(x) not in s for x in s):
        raise AssertionError("S is not closed under inversion")
    if m == q + 1 and len(s) != n_pred:
        raise AssertionError(f"|S|={len(s)} but (q+1+K)/4={n_pred}")
    return RootSetReport(q, m, s, t, k, n_pred, curve_point_count(spec))


# ---------------------------------------------------------------------------
# The whole verification battery over one field

IDENTITY_EXHAUSTIVE_MAX_Q = 16
IDENTITY_RANDOM_TRIALS = 40


def dickson_report(spec: FieldSpec, seed: int = 0) -> dict:
    """Every check battery over one field, as a JSON-ready dict.

    Randomized spot checks (the functional identity in large fields, the
    closed-form comparison) draw from a generator seeded with `seed`, so
    identical inputs reproduce byte-identical reports.
    """
    q = spec.q
    n = spec.t
    m = q + 1
    rng = random.Random(seed)
    rep = CheckReport(f"Dickson root sets and counts over GF(2^{n})")

    roots = _root_bits(spec, m)
    s, t = _split_roots(spec, roots)
    k = kloosterman(spec)
    rep.add("weil-bound", k * k <= 4 * q, f"K={k}")
    rep.add("count-divisibility", (q + 1 + k) % 4 == 0, f"q+1+K={q + 1 + k}")
    n_pred = (q + 1 + k) // 4
    rep.add("kloosterman-count", n_pred == len(s),
            f"(q+1+K)/4={n_pred} |S|={len(s)}")
    rep.add("s-inverse-closed", all(spec.inv(x) in s for x in s))
    rep.add("s-t-disjoint", not (s & t))
    rep.add("t-inverse-outside", all(spec.inv(x) not in t for x in t))
    bad_t = [x for x in t
             if (spec.trace(x), spec.trace(spec.inv(x))) != (0, 1)]
    rep.add("t-trace-pattern", not bad_t,
            "" if not bad_t else f"witness bits {bad_t[0]:#x}")
    rep.add("t-emptiness", (len(t) == 0) == (q <= 4),
            f"q={q} |T|={len(t)}")

    image = _theta_image_of_small_subgroup(spec, m)
    rep.add("root-image-equality", image == roots,
            f"|roots|={len(roots)} |image|={len(image)}")

    e_count = curve_point_count(spec)
    rep.add("hasse-bound", (e_count - (q + 1)) ** 2 <= 4 * q, f"|E|={e_count}")
    if q <= 256:
        naive = curve_point_count_naive(spec)
        rep.add("curve-count-oracle", e_count == naive,
                f"criterion {e_count} vs enumeration {naive}")

    rep.add("identity-on-double-field", _identity_check(spec, rng),
            "D_m(y+1/y) = y^m + y^(-m) over GF(q^2)*")
    rep.add("closed-form-equivalence", _closed_form_check(spec, rng),
            "recurrence matches the binomial form for m <= 10")

    doc = RootSetReport(q, m, frozenset(s), frozenset(t), k, n_pred,
                        e_count).to_dict()
    doc["field"] = field_to_record(spec)
    doc["checks"] = [{"name": c.name, "pass": c.passed, "detail": c.detail}
                     for c in rep.checks]
    doc["passed"] = rep.passed
    return doc


def _identity_check(spec: FieldSpec, rng) -> bool:
    """D_m(y + 1/y) = y^m + y^(-m) over GF(q^2)*.

    Exhaustive in y and in m | q+1 for q <= 16, seeded random pairs beyond.
    """
    double = make_field(2 * spec.t)
    q = spec.q
    if q <= IDENTITY_EXHAUSTIVE_MAX_Q:
        pairs = [(m, y) for y in range(1, double.q) for m in range(1, q + 2)]
    else:
        pairs = [(rng.randrange(1, q + 2), rng.randrange(1, double.q))
                 for _ in range(IDENTITY_RANDOM_TRIALS)]
    for m, y in pairs:
        x = y ^ double.inv(y)
        lhs = _dickson_bits(double, m, x)
        rhs = double.pow(y, m) ^ double.pow(double.inv(y), m)
        if lhs != rhs:
            return False
    return True


def _closed_form_check(spec: FieldSpec, rng) -> bool:
    xs = (range(spec.q) if spec.q <= 256
          else [rng.randrange(spec.q) for _ in range(64)])
    for x in xs:
        e = FieldElement(spec, x)
        for m in range(1, 11):
            if dickson_eval(spec, m, e) != dickson_eval_closed_form(spec, m, e):
                return False
    return True
