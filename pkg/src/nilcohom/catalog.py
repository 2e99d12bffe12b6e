"""Built-in structure tables, families and degeneration witnesses.

Every record whose table appears in print is hard-coded here; algebras that
the literature only cites (most of the 6-dimensional rigid list, g_{247H_1},
the family g_{147E}(t)) are *not* fabricated: they are known names that
resolve only when the optional data pack supplies their tables, and
everything that depends on them reports "skipped" rather than failing.

Names are looked up loosely: ``g_{5,3}``, ``g5,3`` and ``G_{5,3}`` all hit
the same record.  Family records have parameter symbols; evaluating one
needs a value per symbol.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from .errors import ExternalDataRequired, UnknownAlgebra
from .jsonio import algebra_from_dict, pack_checksum
from .liealg import StructureConstants, table_in_basis
from .scalars import FIELD_Q, FIELD_QI
from .tables import parse_symbolic, parse_vector

DATA_PACK_ENV = "NILCOHOM_DATA_PACK"


@dataclass(frozen=True)
class AlgebraRecord:
    name: str
    dim: int
    table: str
    params: tuple = ()
    aliases: tuple = ()
    field: str = FIELD_Q
    provenance: str = "printed"  # printed | external-pack
    notes: str = ""
    cochains: dict = dc_field(default_factory=dict)
    default_samples: tuple = ()  # tuples of parameter assignments

    def symbolic(self):
        return parse_symbolic(self.table, self.dim, self.params)

    def structure(self, params=None) -> StructureConstants:
        assignment = dict(params or {})
        missing = [p for p in self.params if p not in assignment]
        if missing:
            raise UnknownAlgebra(
                f"{self.name} needs parameter values for: {', '.join(missing)}"
            )
        mu = self.symbolic().evaluate(assignment)
        label = self.name
        if self.params:
            vals = ",".join(f"{p}={assignment[p]}" for p in self.params)
            label = f"{self.name}@{vals}"
        return mu.with_name(label)

    def cochain(self, key) -> StructureConstants:
        return parse_symbolic(self.cochains[key], self.dim).evaluate({})


def _norm(name: str) -> str:
    return (
        name.strip()
        .lower()
        .replace(" ", "")
        .replace("_", "")
        .replace("{", "")
        .replace("}", "")
    )


_F = Fraction
_RECORDS = [
    # 3- to 5-dimensional algebras from the dimension-5 classification table
    AlgebraRecord("f_3", 3, "ab = c", notes="standard filiform; Heisenberg h_1"),
    AlgebraRecord("f_4", 4, "ab = c, ac = d", notes="standard filiform"),
    AlgebraRecord("f_5", 5, "ab = c, ac = d, ad = e", notes="standard filiform"),
    AlgebraRecord("f_3+R^2", 5, "ab = c", aliases=("f3+RR",)),
    AlgebraRecord("f_4+R", 5, "ab = c, ac = d"),
    AlgebraRecord("g_{5,1}", 5, "ab = e, cd = e"),
    AlgebraRecord("g_{5,2}", 5, "ab = d, ac = e"),
    AlgebraRecord(
        "g_{5,3}",
        5,
        "ab = d, ad = e, bc = e",
        notes="rigid in the 3-step variety with nonzero H^2_3-nil",
        cochains={"nu1": "bc = c", "nu2": "ab = b, ac = -c, ad = -d"},
    ),
    AlgebraRecord("g_{5,4}", 5, "ab = c, ac = d, bc = e"),
    AlgebraRecord("g_{5,6}", 5, "ab = c, ac = d, ad = e, bc = e"),
    # dimension 6
    AlgebraRecord(
        "12346_E",
        6,
        "ab = c, ac = d, ad = e, bc = e, be = f, cd = -f",
        aliases=("g_{6,14}",),
        notes="5-step; separates the 5-step variety from the split SN_4 one",
    ),
    # the two 7-dimensional solvable surfaces and their nilpotent curves
    AlgebraRecord(
        "g_5(r,t)",
        7,
        "ab = (1+tr)c, ac = d, ad = f+tg, ae = g, af = -rf+g,"
        " bc = e, bd = g, be = rd+f, ce = g",
        params=("r", "t"),
        notes="solvable surface; nilpotent exactly on r=0",
        default_samples=(
            {"r": _F(1), "t": _F(1)},
            {"r": _F(2), "t": _F(3)},
            {"r": _F(-1), "t": _F(2)},
            {"r": _F(1, 2), "t": _F(1, 3)},
        ),
    ),
    AlgebraRecord(
        "g_6(r,t)",
        7,
        "ab = c, ac = d, ad = e, ae = f, af = g, ag = rg, bc = e, bd = f,"
        " be = rtf+(1-t)g, bf = rg, bg = r^2g, cd = -rtf+tg",
        params=("r", "t"),
        notes="solvable surface; nilpotent exactly on r=0",
        default_samples=(
            {"r": _F(1), "t": _F(1)},
            {"r": _F(2), "t": _F(3)},
            {"r": _F(1), "t": _F(-1)},
            {"r": _F(1, 2), "t": _F(1, 3)},
        ),
    ),
    AlgebraRecord(
        "g_1(t)",
        7,
        "ab = c, ac = d, ad = f+tg, ae = g, af = g, bc = e, bd = g, be = f, ce = g",
        params=("t",),
        aliases=("12457_N", "g_{7,0.4}"),
        notes="5-step nilpotent curve: the surface g_5(r,t) on r=0",
        default_samples=({"t": _F(1)}, {"t": _F(2)}, {"t": _F(-1)}, {"t": _F(1, 2)}),
    ),
    AlgebraRecord(
        "g_I(t)",
        7,
        "ab = c, ac = d, ad = e, ae = f, af = g, bc = e, bd = f, be = (1-t)g, cd = tg",
        params=("t",),
        aliases=("123457_I", "g_{7,1.1}"),
        notes="6-step nilpotent curve: the surface g_6(r,t) on r=0",
        default_samples=({"t": _F(1)}, {"t": _F(2)}, {"t": _F(-1)}, {"t": _F(1, 2)}),
    ),
    # 3-step, dimension 7
    AlgebraRecord("g_{137A}", 7, "ab = e, ae = g, cd = f, cf = g"),
    AlgebraRecord("g_{137B}", 7, "ab = e, ae = g, cd = f, cf = g, bd = g"),
    AlgebraRecord("g_{137A_1}", 7, "ac = e, ad = f, ae = g, bc = -f, bd = e, bf = g"),
    AlgebraRecord(
        "g_{137B_1}", 7, "ac = e, ad = f, ae = g, bc = -f, bd = e, bf = g, cd = g"
    ),
    AlgebraRecord(
        "g_{137D}",
        7,
        "ab = e, ad = f, af = g, bc = f, bd = g, ce = -g",
        notes="t=0 member of the curve g_{137D}(t)",
    ),
    AlgebraRecord(
        "g_{137D}(t)",
        7,
        "ab = e, ad = f, af = g, bc = f, bd = g, cd = -t^2e, ce = -g",
        params=("t",),
        notes="isomorphic to g_{137B} for t != 0, degenerates to g_{137D}",
        default_samples=({"t": _F(1)}, {"t": _F(2)}, {"t": _F(-1)}, {"t": _F(1, 2)}),
    ),
    AlgebraRecord(
        "g_{147D}", 7, "ab = d, ac = -f, ae = g, af = g, bc = e, bf = g, cd = -2g"
    ),
    AlgebraRecord(
        "g_{147E_1}(t)",
        7,
        "ab = d, ac = -f, af = -tg, bc = e, be = tg, bf = 2g, cd = -2g",
        params=("t",),
        notes="one of the two 1-parameter curves in the 3-step dim-7 variety",
        default_samples=({"t": _F(3, 2)}, {"t": _F(2)}, {"t": _F(5)}, {"t": _F(3)}),
    ),
    AlgebraRecord(
        "g_{247G}",
        7,
        "ab = d, ac = e, ad = f, ae = f, bd = f, be = g, cd = g, ce = f",
        notes="printed via the family g_{247G}(t) at t=0",
    ),
    AlgebraRecord(
        "g_{247G}(t)",
        7,
        "ab = d, ac = e, ad = (1+t^3/2)f+(t^3/2)g, ae = (1-t^3/2)f-(t^3/2)g,"
        " bd = f, be = g, cd = g, ce = f",
        params=("t",),
        notes="isomorphic to g_{247H} for t != 0, degenerates to g_{247G}",
        default_samples=({"t": _F(2)}, {"t": _F(1)}, {"t": _F(-1)}, {"t": _F(1, 2)}),
    ),
    AlgebraRecord(
        "g_{247H}", 7, "ab = d, ac = e, ad = f, bd = f, be = g, cd = g, ce = f"
    ),
    AlgebraRecord("g_{247K}", 7, "ab = d, ac = e, ad = f, be = g, cd = g, ce = f"),
    AlgebraRecord(
        "g_{247K}(t)",
        7,
        "ab = d, ac = e, ad = f, bc = t^2e, be = g, cd = g, ce = f",
        params=("t",),
        notes="isomorphic to g_{247H} over Q(i) for t != 0, degenerates to g_{247K}",
        default_samples=({"t": _F(1)}, {"t": _F(2)}, {"t": _F(-1)}, {"t": _F(1, 2)}),
    ),
    AlgebraRecord(
        "g_{247K}-GR",
        7,
        "ab = c, ac = d, ae = f, af = g, bc = d, be = f, ce = g, ef = d",
        notes="presentation of g_{247K} once claimed rigid; see witness 247K-GR-form",
    ),
]

# Names the literature defines but whose tables are not printed anywhere we
# hard-code from; they resolve only through the external data pack.
_EXTERNAL = {
    "g_{247H_1}": (7, ("g247h1",)),
    "g_{147E}(t)": (7, ()),
    "36": (6, ("g_{6,26}",)),
    "13+13": (6, ("g_{6,22}",)),
    "246_E": (6, ("g_{6,24}",)),
    "136_A": (6, ("g_{6,19}",)),
    "1246": (6, ("g_{6,13}",)),
    "1346_C": (6, ("g_{6,21}",)),
}


@dataclass(frozen=True)
class IsomorphismWitness:
    """Change of basis carrying one bracket's table onto another's."""

    id: str
    source: str
    basis: tuple
    target: str
    param: str | None = None  # symbol ranged over by source/basis/target
    fixed: dict = dc_field(default_factory=dict)  # pinned parameter values
    field_tag: str = FIELD_Q
    validity: str = ""
    samples: tuple = ()


_WITNESSES = [
    IsomorphismWitness(
        id="137B-from-curve",
        source="g_{137D}(t)",
        basis=(
            "ta+c",
            "2t(tb-d)",
            "-ta+c",
            "-2t(tb+d)",
            "4t^2(te-f)",
            "4t^2(te+f)",
            "-8t^3g",
        ),
        target="g_{137B}",
        param="t",
        validity="t != 0",
        samples=(_F(1), _F(2), _F(-1), _F(1, 2)),
    ),
    IsomorphismWitness(
        id="147E1-to-147D",
        source="g_{147E_1}(t)",
        basis=("-a", "a+b", "c", "-d", "e-f", "-f", "-g"),
        target="g_{147D}",
        fixed={"t": _F(1)},
        validity="t = 1",
        samples=(_F(1),),
    ),
    IsomorphismWitness(
        id="247H-to-247G-curve",
        source="g_{247H}",
        basis=(
            "2t^2a+(1/2-t^2)b+1/2c",
            "1/2(1+t)b+1/2(1-t)c",
            "1/2(1-t)b+1/2(1+t)c",
            "t^2(1+t)d+t^2(1-t)e",
            "t^2(1-t)d+t^2(1+t)e",
            "t^2(1+t^2)f+t^2(1-t^2)g",
            "t^2(1-t^2)f+t^2(1+t^2)g",
        ),
        target="g_{247G}(t)",
        param="t",
        validity="t != 0",
        samples=(_F(2), _F(1), _F(-1), _F(1, 2)),
    ),
    IsomorphismWitness(
        id="247K-GR-form",
        source="g_{247K}-GR",
        basis=("b", "-a+b", "e", "c", "f", "d", "-g"),
        target="g_{247K}",
        samples=(),
    ),
    IsomorphismWitness(
        id="247H-to-247K-curve",
        source="g_{247H}",
        basis=("-ia", "-it^2(a-b)", "tc", "t^2d", "-ite", "-it^2f", "t^3g"),
        target="g_{247K}(t)",
        param="t",
        field_tag=FIELD_QI,
        validity="t != 0; establishes the Gaussian-rational degeneration to g_{247K}",
        samples=(_F(1), _F(2)),
    ),
]

# (family, parameter value, target, mode): literal table equality at the
# limit, or reuse of a registered witness
_DEGENERATIONS = [
    ("g_{137D}(t)", _F(0), "g_{137D}", "literal"),
    ("g_{147E_1}(t)", _F(1), "g_{147D}", "witness:147E1-to-147D"),
    ("g_{247G}(t)", _F(0), "g_{247G}", "literal"),
    ("g_{247K}(t)", _F(0), "g_{247K}", "literal"),
]


class Catalog:
    def __init__(self, data_pack=None):
        self._records = {}
        self._lookup = {}
        for rec in _RECORDS:
            self._records[rec.name] = rec
            for key in (rec.name,) + rec.aliases:
                self._lookup[_norm(key)] = rec.name
        self._external = {}
        for name, (dim, aliases) in _EXTERNAL.items():
            for key in (name,) + aliases:
                self._external[_norm(key)] = name
        self._witnesses = {w.id: w for w in _WITNESSES}
        self.pack_checksum = None
        self.pack_name = None
        path = data_pack or os.environ.get(DATA_PACK_ENV)
        if path:
            self.load_data_pack(path)

    # -- records -----------------------------------------------------------

    def names(self):
        return sorted(self._records)

    def has(self, name):
        return _norm(name) in self._lookup

    def get(self, name) -> AlgebraRecord:
        key = _norm(name)
        if key in self._lookup:
            return self._records[self._lookup[key]]
        if key in self._external:
            raise ExternalDataRequired(
                f"{self._external[key]} is only cited, not printed: external data"
                f" pack required (set {DATA_PACK_ENV} or pass --data-pack)"
            )
        raise UnknownAlgebra(f"unknown algebra {name!r}")

    def structure(self, name, params=None) -> StructureConstants:
        return self.get(name).structure(params)

    # -- data pack -----------------------------------------------------------

    def load_data_pack(self, path):
        root = Path(path)
        manifest = {}
        mpath = root / "manifest.json"
        if mpath.exists():
            manifest = json.loads(mpath.read_text())
        count = 0
        for fp in sorted(root.glob("*.json")):
            if fp.name == "manifest.json":
                continue
            data = json.loads(fp.read_text())
            name = data["name"]
            if "table" in data:
                rec = AlgebraRecord(
                    name,
                    int(data["dim"]),
                    data["table"],
                    params=tuple(data.get("params", ())),
                    aliases=tuple(data.get("aliases", ())),
                    field=data.get("field", FIELD_Q),
                    provenance="external-pack",
                    notes=data.get("citation", ""),
                )
            else:
                mu = algebra_from_dict(data)
                from .tables import format_table

                rec = AlgebraRecord(
                    name,
                    mu.n,
                    format_table(mu),
                    aliases=tuple(data.get("aliases", ())),
                    field=mu.field,
                    provenance="external-pack",
                    notes=data.get("citation", ""),
                )
            self._records[rec.name] = rec
            for key in (rec.name,) + rec.aliases:
                self._lookup[_norm(key)] = rec.name
            count += 1
        self.pack_checksum = pack_checksum(root)
        self.pack_name = manifest.get("name", root.name)
        return count

    # -- witnesses and degenerations --------------------------------------------

    def witnesses(self):
        return dict(self._witnesses)

    def witness(self, wid) -> IsomorphismWitness:
        return self._witnesses[wid]

    def verify_witness(self, w, at=None):
        """Run one witness: (ok, diff list of bracket mismatches)."""
        if isinstance(w, str):
            w = self.witness(w)
        assignment = dict(w.fixed)
        if w.param is not None:
            if at is None:
                raise ValueError(f"witness {w.id} needs a value for {w.param}")
            assignment[w.param] = at
        src = self.get(w.source)
        mu = src.structure({p: assignment[p] for p in src.params})
        params = tuple(assignment)
        vectors = []
        for expr in w.basis:
            polys = parse_vector(expr, src.dim, params)
            vectors.append([p.evaluate(assignment) for p in polys])
        computed = table_in_basis(mu, vectors)  # raises SingularMatrix if bad
        tgt_rec = self.get(w.target)
        target = tgt_rec.structure({p: assignment[p] for p in tgt_rec.params})
        diffs = _table_diff(computed, target)
        return not diffs, diffs

    def degenerations(self):
        return list(_DEGENERATIONS)

    def verify_degeneration(self, family, value, target) -> bool:
        """True iff the family's member at the value is the target algebra,
        by literal table equality or by the registered witness."""
        fam = self.get(family)
        for f, v, tgt, mode in _DEGENERATIONS:
            if _norm(f) == _norm(fam.name) and v == value and _norm(tgt) == _norm(target):
                if mode == "literal":
                    sym = fam.params[0] if fam.params else None
                    mu = fam.structure({sym: value} if sym else {})
                    return mu == self.structure(target)
                wid = mode.split(":", 1)[1]
                ok, _ = self.verify_witness(wid)
                return ok
        # not registered: fall back to literal comparison
        sym = fam.params[0] if fam.params else None
        mu = fam.structure({sym: value} if sym else {})
        return mu == self.structure(target)


def _table_diff(a: StructureConstants, b: StructureConstants):
    diffs = []
    pairs = set(a.c) | set(b.c)
    for pair in sorted(pairs):
        ca = a.c.get(pair, {})
        cb = b.c.get(pair, {})
        if not _coeffs_equal(ca, cb):
            diffs.append((pair, ca, cb))
    return diffs


def _coeffs_equal(ca, cb):
    if set(ca) != set(cb):
        return False
    return all(ca[k] == cb[k] for k in ca)


_default = None


def default_catalog() -> Catalog:
    """Shared catalog instance honoring the data-pack environment variable."""
    global _default
    if _default is None:
        _default = Catalog()
    return _default


# -- printed polynomial data ---------------------------------------------------------

# Generators of the degree-2 (Jacobi) and degree-4 (nested-word) parts of the
# dimension-6 ideal, and the degree-3 split-word polynomials Q1..Q14, exactly
# as printed; Q9 is stored expanded.
PRINTED_J_64 = (
    "t_{1,2,3}*t_{3,4,5}",
    "t_{1,3,4}*t_{4,5,6}",
    "t_{2,3,4}*t_{4,5,6}",
    "t_{1,2,3}*t_{3,5,6}+t_{1,2,4}*t_{4,5,6}",
    "t_{1,2,4}*t_{3,4,5}+t_{2,3,4}*t_{1,4,5}-t_{1,3,4}*t_{2,4,5}",
    "t_{1,3,5}*t_{4,5,6}+t_{3,4,5}*t_{1,5,6}-t_{1,4,5}*t_{3,5,6}",
    "t_{2,3,5}*t_{4,5,6}+t_{3,4,5}*t_{2,5,6}-t_{2,4,5}*t_{3,5,6}",
    "t_{1,2,3}*t_{3,4,6}-t_{1,2,5}*t_{4,5,6}-t_{2,4,5}*t_{1,5,6}+t_{1,4,5}*t_{2,5,6}",
    "t_{1,2,4}*t_{3,4,6}+t_{2,3,4}*t_{1,4,6}-t_{1,3,4}*t_{2,4,6}"
    "+t_{1,2,5}*t_{3,5,6}+t_{2,3,5}*t_{1,5,6}-t_{1,3,5}*t_{2,5,6}",
)

PRINTED_N_64 = tuple(
    f"t_{{1,2,3}}*t_{{{a},3,4}}*t_{{{b},4,5}}*t_{{{c},5,6}}"
    for a in (1, 2)
    for b in (1, 2, 3)
    for c in (1, 2, 3, 4)
)

NAMED_POLYNOMIALS = {
    "P1": "t_{1,2,3}*t_{3,4,5}",
    "P2": "t_{1,2,4}*t_{3,4,5}+t_{2,3,4}*t_{1,4,5}-t_{1,3,4}*t_{2,4,5}",
    "Q1": "t_{1,2,3}*t_{1,3,4}*t_{3,4,5}",
    "Q2": "t_{1,2,3}*t_{2,3,4}*t_{3,4,5}",
    "Q3": "t_{1,3,4}*t_{1,4,5}*t_{4,5,6}",
    "Q4": "t_{1,3,4}*t_{2,4,5}*t_{4,5,6}",
    "Q5": "t_{1,3,4}*t_{3,4,5}*t_{4,5,6}",
    "Q6": "t_{1,4,5}*t_{2,3,4}*t_{4,5,6}",
    "Q7": "t_{2,3,4}*t_{2,4,5}*t_{4,5,6}",
    "Q8": "t_{2,3,4}*t_{3,4,5}*t_{4,5,6}",
    "Q9": "t_{1,3,4}*t_{2,3,5}*t_{4,5,6}-t_{1,3,5}*t_{2,3,4}*t_{4,5,6}",
    "Q10": "t_{1,2,3}*t_{1,4,5}*t_{3,5,6}+t_{1,2,4}*t_{1,4,5}*t_{4,5,6}",
    "Q11": "t_{1,2,3}*t_{2,4,5}*t_{3,5,6}+t_{1,2,4}*t_{2,4,5}*t_{4,5,6}",
    "Q12": "t_{1,2,3}*t_{3,4,5}*t_{3,5,6}+t_{1,2,4}*t_{3,4,5}*t_{4,5,6}",
    "Q13": "t_{1,2,3}*t_{1,3,4}*t_{3,4,6}+t_{1,2,3}*t_{1,3,5}*t_{3,5,6}"
    "+t_{1,2,4}*t_{1,3,5}*t_{4,5,6}-t_{1,2,5}*t_{1,3,4}*t_{4,5,6}",
    "Q14": "t_{1,2,3}*t_{2,3,4}*t_{3,4,6}+t_{1,2,3}*t_{2,3,5}*t_{3,5,6}"
    "+t_{1,2,4}*t_{2,3,5}*t_{4,5,6}-t_{1,2,5}*t_{2,3,4}*t_{4,5,6}",
}

# the printed zero-assignment separating Q14 from the dim-6 ideal, its
# restriction of that ideal, and the basis-swap mirror used for Q13 (the
# one-variable variant alone does not separate; see the e1<->e2 symmetry)
Q14_ASSIGNMENT = {
    v: 0
    for v in [
        (1, 2, 4), (1, 3, 4), (1, 4, 5), (1, 4, 6), (2, 3, 5),
        (2, 5, 6), (3, 4, 5), (3, 5, 6), (4, 5, 6),
    ]
}
Q13_ASSIGNMENT = {
    v: 0
    for v in [
        (1, 2, 4), (2, 3, 4), (2, 4, 5), (2, 4, 6), (1, 3, 5),
        (1, 5, 6), (3, 4, 5), (3, 5, 6), (4, 5, 6),
    ]
}
RESTRICTED_IDEAL_64 = (
    "t_{1,2,3}*t_{2,3,4}*t_{2,4,5}*t_{1,5,6}",
    "t_{1,2,3}*t_{3,4,6}-t_{2,4,5}*t_{1,5,6}",
)


def named_polynomial(name):
    from .polynomials import parse_tpoly

    key = name.strip().upper().replace(" ", "")
    if key not in NAMED_POLYNOMIALS:
        raise UnknownAlgebra(f"unknown polynomial {name!r} (P1, P2, Q1..Q14)")
    return parse_tpoly(NAMED_POLYNOMIALS[key])
