"""Structure-constant ideals of the nilpotency varieties.

In the upper-triangular chart mu(e_i, e_j) = sum_{k>j} t_{i,j,k} e_k (1-based,
i < j) the coordinates of the Jacobi tensor and of the nested-word operators
are polynomials in the t_{i,j,k}.  This module evaluates the operators on the
generic chart point to produce those generator lists, decides bounded-degree
ideal membership by one exact linear solve, and carries a small capped
Buchberger engine for the substitution-based non-membership certificates.

Positive membership is primarily the linear-algebra route; the Groebner route
is kept for restricted (few-variable) systems and never silently degrades: a
capped run raises instead of answering.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import ResourceCapExceeded
from .liealg import StructureConstants, jacobi, n_k, sn_k
from .linalg import ExactMatrix, solve
from .polynomials import MultiPoly, _mono_mul


def chart_variables(n):
    """Chart variables (i, j, k), 1-based, i < j < ... with k > j."""
    return [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        for k in range(j + 1, n + 1)
    ]


def generic_chart(n) -> StructureConstants:
    """The generic strictly upper-triangular bracket with polynomial entries."""
    brackets = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            row = {k - 1: MultiPoly.var((i, j, k)) for k in range(j + 1, n + 1)}
            if row:
                brackets[(i - 1, j - 1)] = row
    return StructureConstants(n, brackets, field="sym")


def generators(n, k, kind):
    """Distinct nonzero coordinate polynomials of J, N_k or SN_k on the chart.

    Scalar-multiple duplicates are dropped; order is fixed by scanning the
    argument tuples and coordinates lexicographically.
    """
    kind = kind.upper()
    mu = generic_chart(n)
    if kind == "J":
        tensor = jacobi(mu)
    elif kind == "N":
        tensor = n_k(mu, k)
    elif kind == "SN":
        tensor = sn_k(mu, k)
    else:
        raise ValueError(f"kind must be J, N or SN, not {kind!r}")
    seen = set()
    out = []
    for args in sorted(tensor):
        for coord in tensor[args]:
            if not isinstance(coord, MultiPoly) or coord.is_zero():
                continue
            p = coord.primitive()
            key = frozenset(p.terms.items())
            if key not in seen:
                seen.add(key)
                out.append(p)
    return out


@dataclass(frozen=True)
class IdealPresentation:
    """Tagged generating set of the ideal cut out by J and N_k."""

    n: int
    k: int
    jacobi_gens: tuple
    word_gens: tuple

    @property
    def gens(self):
        return list(self.jacobi_gens) + list(self.word_gens)


def nilpotency_ideal(n, k) -> IdealPresentation:
    return IdealPresentation(
        n, k, tuple(generators(n, k, "J")), tuple(generators(n, k, "N"))
    )


def substitute(f: MultiPoly, assignment) -> MultiPoly:
    """Evaluation homomorphism on the assigned variables (others survive)."""
    return f.substitute(assignment)


# -- bounded-degree membership by exact linear algebra ------------------------------


@dataclass
class MembershipCertificate:
    target: MultiPoly
    multipliers: list
    bound: int

    def verify(self, gens) -> bool:
        acc = MultiPoly()
        for m, g in zip(self.multipliers, gens):
            acc = acc + m * g
        return acc == self.target


def _multiweight(poly):
    """Torus weight of a multihomogeneous chart polynomial, or None."""
    weights = set()
    for mono in poly.terms:
        acc = {}
        for (i, j, k), e in mono:
            acc[i] = acc.get(i, 0) + e
            acc[j] = acc.get(j, 0) + e
            acc[k] = acc.get(k, 0) - e
        weights.add(tuple(sorted((p, w) for p, w in acc.items() if w)))
        if len(weights) > 1:
            return None
    return weights.pop() if weights else ()


def _mono_weight(mono):
    acc = {}
    for (i, j, k), e in mono:
        acc[i] = acc.get(i, 0) + e
        acc[j] = acc.get(j, 0) + e
        acc[k] = acc.get(k, 0) - e
    return tuple(sorted((p, w) for p, w in acc.items() if w))


def _weight_sum(w1, w2):
    acc = dict(w1)
    for p, w in w2:
        acc[p] = acc.get(p, 0) + w
    return tuple(sorted((p, w) for p, w in acc.items() if w))


def member_bounded(f: MultiPoly, gens, bound) -> MembershipCertificate | None:
    """Search multipliers m_j with deg(m_j g_j) <= bound and sum m_j g_j = f.

    Returns a verified certificate, or None (which is *not* a proof of
    non-membership, only of absence at this bound).  Homogeneity of the
    inputs, in total degree and in the torus multigrading of the chart
    variables, restricts the multiplier monomials without losing any
    certificate, since membership identities project onto graded pieces.
    """
    gens = list(gens)
    if f.is_zero():
        return MembershipCertificate(f, [MultiPoly() for _ in gens], bound)
    if bound < f.degree():
        raise ValueError("bound is smaller than deg(f)")
    universe = sorted(set().union(f.variables(), *(g.variables() for g in gens)))
    # a multiplier variable absent from f and every generator could be set to
    # 0 in any certificate, so this universe is enough
    homog = f.is_homogeneous() and all(g.is_homogeneous() for g in gens)
    use_weights = all(isinstance(v, tuple) for v in universe)
    wf = _multiweight(f) if use_weights else None
    if wf is None:
        use_weights = False

    columns = []  # (gen index, monomial)
    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        dg = g.degree()
        if homog:
            degs = [f.degree() - dg] if f.degree() >= dg else []
        else:
            degs = range(0, bound - dg + 1)
        wg = _multiweight(g) if use_weights else None
        restrict_w = use_weights and wg is not None
        for d in degs:
            if d < 0:
                continue
            for combo in combinations_with_replacement(universe, d):
                mono = {}
                for v in combo:
                    mono[v] = mono.get(v, 0) + 1
                mono = tuple(sorted(mono.items()))
                if restrict_w and _weight_sum(_mono_weight(mono), wg) != wf:
                    continue
                columns.append((j, mono))

    row_index = {}
    entries = {}
    for cidx, (j, mono) in enumerate(columns):
        for gm, gc in gens[j].terms.items():
            m = _mono_mul(mono, gm)
            r = row_index.setdefault(m, len(row_index))
            key = (r, cidx)
            entries[key] = entries.get(key, 0) + gc
    for m in f.terms:
        if m not in row_index:
            return None
    mat = ExactMatrix(len(row_index), len(columns), entries)
    rhs = [Fraction(0)] * len(row_index)
    for m, c in f.terms.items():
        rhs[row_index[m]] = c
    x = solve(mat, rhs)
    if x is None:
        return None
    multipliers = [MultiPoly() for _ in gens]
    for cidx, (j, mono) in enumerate(columns):
        if x[cidx]:
            multipliers[j] = multipliers[j] + MultiPoly.term(x[cidx], mono)
    cert = MembershipCertificate(f, multipliers, bound)
    assert cert.verify(gens), "certificate failed re-verification"
    return cert


# -- small capped Buchberger --------------------------------------------------------


def _to_vec(poly, universe, index):
    out = {}
    for mono, c in poly.terms.items():
        vec = [0] * len(universe)
        for v, e in mono:
            vec[index[v]] = e
        out[tuple(vec)] = c
    return out


def _from_vec(vec_poly, universe):
    terms = {}
    for vec, c in vec_poly.items():
        mono = tuple((universe[i], e) for i, e in enumerate(vec) if e)
        terms[mono] = c
    return MultiPoly(terms)


def _key_grevlex(vec):
    return (sum(vec), tuple(-e for e in reversed(vec)))


def _key_lex(vec):
    return vec


_ORDERS = {"grevlex": _key_grevlex, "lex": _key_lex}


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vec_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _shift(poly, vec, coeff):
    return {_vec_add(m, vec): c * coeff for m, c in poly.items()}


def _sub_inplace(f, g):
    for m, c in g.items():
        s = f.get(m, 0) - c
        if s:
            f[m] = s
        elif m in f:
            del f[m]


def _nf_vec(f, basis, key):
    """Full normal form: every term reduced; deterministic reducer choice."""
    work = dict(f)
    out = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for lm, lc, g in basis:
            if _divides(lm, m):
                work[m] = c
                _sub_inplace(work, _shift(g, _vec_sub(m, lm), c / lc))
                break
        else:
            out[m] = c
    return out


def _primitive_vec(p, key):
    if not p:
        return p
    from math import gcd, lcm as _lcm

    num = 0
    den = 1
    for c in p.values():
        num = gcd(num, c.numerator)
        den = _lcm(den, c.denominator)
    content = Fraction(num, den)
    if p[max(p, key=key)] < 0:
        content = -content
    return {m: c / content for m, c in p.items()}


class GroebnerBasis:
    """Reduced Groebner basis with a normal-form oracle."""

    def __init__(self, universe, order, vec_polys):
        self.universe = list(universe)
        self.order = order
        self._key = _ORDERS[order]
        self._vecs = vec_polys
        self.members = [_from_vec(p, self.universe) for p in vec_polys]

    def normal_form(self, f: MultiPoly) -> MultiPoly:
        extra = sorted(f.variables() - set(self.universe))
        universe = sorted(set(self.universe) | set(extra))
        index = {v: i for i, v in enumerate(universe)}
        basis = []
        for p in self.members:
            vp = _to_vec(p, universe, index)
            lm = max(vp, key=self._key)
            basis.append((lm, vp[lm], vp))
        fv = _to_vec(f, universe, index)
        return _from_vec(_nf_vec(fv, basis, self._key), universe)

    def contains(self, f: MultiPoly) -> bool:
        return self.normal_form(f).is_zero()


def groebner_small(gens, order="grevlex", max_basis=120, max_pairs=20000, max_degree=60):
    """Buchberger with hard caps; raises ResourceCapExceeded rather than guess.

    Meant for the restricted few-variable systems that substitution produces;
    the caps are generous for those and a deliberate wall for anything big.
    """
    if order not in _ORDERS:
        raise ValueError(f"unknown monomial order {order!r}")
    key = _ORDERS[order]
    polys = [g for g in gens if not g.is_zero()]
    universe = sorted(set().union(set(), *(g.variables() for g in polys)))
    index = {v: i for i, v in enumerate(universe)}
    basis = []
    seen = set()
    for g in polys:
        vp = _primitive_vec(_to_vec(g, universe, index), key)
        fk = frozenset(vp.items())
        if fk not in seen:
            seen.add(fk)
            basis.append(vp)

    def lm(p):
        return max(p, key=key)

    pairs = []
    for i in range(len(basis)):
        for j in range(i):
            lcm_v = _vec_lcm(lm(basis[i]), lm(basis[j]))
            heapq.heappush(pairs, (sum(lcm_v), j, i, lcm_v))
    popped = 0
    while pairs:
        _, i, j, lcm_v = heapq.heappop(pairs)
        popped += 1
        if popped > max_pairs:
            raise ResourceCapExceeded(f"Buchberger pair cap {max_pairs} exceeded")
        fi, fj = basis[i], basis[j]
        lmi, lmj = lm(fi), lm(fj)
        if _vec_add(lmi, lmj) == lcm_v:
            continue  # coprime leading monomials: s-poly reduces to zero
        s = _shift(fi, _vec_sub(lcm_v, lmi), Fraction(1) / fi[lmi])
        _sub_inplace(s, _shift(fj, _vec_sub(lcm_v, lmj), Fraction(1) / fj[lmj]))
        red = [(lm(g), g[lm(g)], g) for g in basis]
        s = _nf_vec(s, red, key)
        if not s:
            continue
        s = _primitive_vec(s, key)
        if max(sum(m) for m in s) > max_degree:
            raise ResourceCapExceeded(f"degree cap {max_degree} exceeded")
        basis.append(s)
        if len(basis) > max_basis:
            raise ResourceCapExceeded(f"basis-size cap {max_basis} exceeded")
        new = len(basis) - 1
        for t in range(new):
            lcm_v = _vec_lcm(lm(basis[t]), lm(s))
            heapq.heappush(pairs, (sum(lcm_v), t, new, lcm_v))

    # interreduce to the unique reduced basis
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = [
                (lm(g), g[lm(g)], g) for t, g in enumerate(basis) if t != i and g
            ]
            r = _nf_vec(basis[i], others, key)
            r = _primitive_vec(r, key) if r else r
            if r != basis[i]:
                basis[i] = r
                changed = True
        basis = [g for g in basis if g]
    basis.sort(key=lambda g: key(lm(g)))
    return GroebnerBasis(universe, order, basis)


def non_membership(f: MultiPoly, gens, assignment, order="grevlex", **caps) -> bool:
    """True certifies f not in ideal(gens), via an evaluation homomorphism.

    Substitution preserves membership, so a nonzero normal form of the
    substituted target against a Groebner basis of the substituted ideal is
    a sound non-membership certificate.  False means "no conclusion".
    """
    fs = substitute(f, assignment)
    if fs.is_zero():
        return False
    sub_gens = []
    seen = set()
    for g in gens:
        gs = substitute(g, assignment)
        if gs.is_zero():
            continue
        p = gs.primitive()
        fk = frozenset(p.terms.items())
        if fk not in seen:
            seen.add(fk)
            sub_gens.append(p)
    gb = groebner_small(sub_gens, order=order, **caps)
    return not gb.contains(fs)
