"""Instance files, shipped fixtures and random instance generators.

An instance is either a finite table algebra::

    {"basis": [[name, degree], ...],
     "brackets": [[x, y, [[name, "p/q"], ...]], ...],
     "abelian": [names spanning a],
     "P": [[name, "p/q"], ...],
     "Ehat": {src: [[tgt, "p/q"], ...]},
     "degree": 1,
     "mt": [{"order": k, "inner": [[name, "p/q"], ...]} | {"order": k, "map": {...}}]}

or a Poisson instance on a coordinate submanifold::

    {"poisson": {"dim": n, "tangent": k, "D": 1, "D_tan": 1, "names": [...],
                 "bivector": [[exps, idx, "p/q"], ...],
                 "flow": [{"order": k, "field": [[exps, idx, "p/q"], ...]}]}}

Multivector indices in files are 1-based.  Coefficients are exact strings
(or integers); floats are rejected.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .core.linear import GradedBasis, LinMap, Vector
from .core.scalar import format_scalar, parse_scalar
from .gauge import TimeDerivation
from .lie import DerivationSpec, TableGLA, VAlgebra, is_maurer_cartan, koszul
from .poisson import (SchoutenAlgebra, SubmanifoldContext, build_valgebra, field_derivation,
                      is_tangent)


class InstanceError(ValueError):
    """Malformed instance description; the message names the offending location."""


@dataclass
class Instance:
    name: str
    V: VAlgebra
    E: DerivationSpec
    flow: list[tuple[int, DerivationSpec]] = field(default_factory=list)
    ctx: SubmanifoldContext | None = None
    pi: Vector | None = None
    data: dict = field(default_factory=dict)

    @property
    def is_poisson(self) -> bool:
        return self.ctx is not None

    def time_derivation(self, order: int) -> TimeDerivation:
        coeffs = [DerivationSpec(self.V.gla, 0) for _ in range(order + 1)]
        for k, m in self.flow:
            if k > order:
                continue
            prev = coeffs[k]
            hat = m.ehat if prev.ehat is None else (prev.ehat if m.ehat is None else prev.ehat + m.ehat)
            coeffs[k] = DerivationSpec(self.V.gla, 0, hat, prev.p_element + m.p_element)
        return TimeDerivation(self.V.gla, coeffs, order)


# --- parsing helpers -----------------------------------------------------------

def _scalar(value, where: str) -> Fraction:
    try:
        return parse_scalar(value)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InstanceError(f"{where}: expected a list")
    return value


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"{where}: expected an integer")
    return value


def _named_vector(basis: GradedBasis, terms, where: str) -> Vector:
    acc: dict = {}
    for n, term in enumerate(_list(terms, where)):
        here = f"{where}[{n}]"
        if not isinstance(term, list) or len(term) != 2:
            raise InstanceError(f"{here}: expected [name, coefficient]")
        try:
            i = basis.index(term[0])
        except (KeyError, TypeError):
            raise InstanceError(f"{here}: unknown basis element {term[0]!r}") from None
        acc[i] = acc.get(i, Fraction(0)) + _scalar(term[1], here)
    return Vector(acc)


def _named_map(basis: GradedBasis, spec, degree: int, where: str) -> LinMap:
    if not isinstance(spec, dict):
        raise InstanceError(f"{where}: expected an object mapping names to vectors")
    cols = {}
    for src, terms in spec.items():
        try:
            i = basis.index(src)
        except KeyError:
            raise InstanceError(f"{where}: unknown basis element {src!r}") from None
        cols[i] = _named_vector(basis, terms, f"{where}[{src!r}]")
    return LinMap(degree, cols)


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(load_json(text), name=path)


def parse_instance(data: Any, name: str = "instance") -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("top level: expected a JSON object")
    name = data.get("name", name)
    if "poisson" in data:
        return _parse_poisson(data["poisson"], name, data)
    if "basis" not in data:
        raise InstanceError("top level: need either a 'basis' or a 'poisson' section")
    return _parse_table(data, name)


def _parse_table(data: dict, name: str) -> Instance:
    elems = []
    for n, item in enumerate(_list(data["basis"], "basis")):
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], str):
            raise InstanceError(f"basis[{n}]: expected [name, degree]")
        elems.append((item[0], _int(item[1], f"basis[{n}][1]")))
    try:
        basis = GradedBasis(tuple(elems))
    except ValueError as exc:
        raise InstanceError(f"basis: {exc}") from None
    entries = []
    for n, item in enumerate(_list(data.get("brackets", []), "brackets")):
        here = f"brackets[{n}]"
        if not isinstance(item, list) or len(item) != 3:
            raise InstanceError(f"{here}: expected [x, y, result]")
        try:
            i, j = basis.index(item[0]), basis.index(item[1])
        except (KeyError, TypeError):
            raise InstanceError(f"{here}: unknown basis element in {item[:2]!r}") from None
        entries.append((i, j, _named_vector(basis, item[2], f"{here}[2]")))
    gla = TableGLA.from_entries(basis, entries)
    a_names = _list(data.get("abelian", []), "abelian")
    try:
        a_keys = [basis.index(x) for x in a_names]
    except (KeyError, TypeError):
        raise InstanceError(f"abelian: unknown basis element in {a_names!r}") from None
    V = VAlgebra(gla, a_keys)
    degree = _int(data.get("degree", 1), "degree")
    P = _named_vector(basis, data.get("P", []), "P")
    ehat = _named_map(basis, data["Ehat"], degree, "Ehat") if "Ehat" in data else None
    E = DerivationSpec(gla, degree, ehat, P)
    flow = []
    for n, item in enumerate(_list(data.get("mt", []), "mt")):
        here = f"mt[{n}]"
        if not isinstance(item, dict):
            raise InstanceError(f"{here}: expected an object")
        k = _int(item.get("order"), f"{here}.order")
        if k < 0:
            raise InstanceError(f"{here}.order: must be non-negative")
        if "inner" in item:
            m = DerivationSpec(gla, 0, None, _named_vector(basis, item["inner"], f"{here}.inner"))
        elif "map" in item:
            m = DerivationSpec(gla, 0, _named_map(basis, item["map"], 0, f"{here}.map"))
        else:
            raise InstanceError(f"{here}: needs 'inner' or 'map'")
        flow.append((k, m))
    return Instance(name, V, E, flow, data=data)


def _poly_terms(gla: SchoutenAlgebra, terms, where: str) -> Vector:
    parsed = []
    for n, term in enumerate(_list(terms, where)):
        here = f"{where}[{n}]"
        if not isinstance(term, list) or len(term) != 3:
            raise InstanceError(f"{here}: expected [exponents, indices, coefficient]")
        exps = [_int(e, here) for e in _list(term[0], here)]
        idx = [_int(i, here) - 1 for i in _list(term[1], here)]
        parsed.append((exps, idx, _scalar(term[2], here)))
    try:
        return gla.element(parsed)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _parse_poisson(sec: Any, name: str, data: dict) -> Instance:
    if not isinstance(sec, dict):
        raise InstanceError("poisson: expected an object")
    dims = (_int(sec.get("dim"), "poisson.dim"), _int(sec.get("tangent", 0), "poisson.tangent"),
            _int(sec.get("D", 1), "poisson.D"), _int(sec.get("D_tan", 1), "poisson.D_tan"))
    try:
        ctx = SubmanifoldContext(*dims)
    except ValueError as exc:
        raise InstanceError(f"poisson: {exc}") from None
    names = sec.get("names")
    if names is not None and (not isinstance(names, list) or len(names) != ctx.dim):
        raise InstanceError("poisson.names: expected one name per coordinate")
    V = build_valgebra(ctx, names)
    gla = V.gla
    pi = _poly_terms(gla, sec.get("bivector", []), "poisson.bivector")
    if not pi.is_homogeneous(gla.degree, 1):
        raise InstanceError("poisson.bivector: every term needs exactly two indices")
    flow = []
    for n, item in enumerate(_list(sec.get("flow", []), "poisson.flow")):
        here = f"poisson.flow[{n}]"
        if not isinstance(item, dict):
            raise InstanceError(f"{here}: expected an object")
        k = _int(item.get("order"), f"{here}.order")
        if k < 0:
            raise InstanceError(f"{here}.order: must be non-negative")
        Y = _poly_terms(gla, item.get("field", []), f"{here}.field")
        if not is_tangent(ctx, Y):
            raise InstanceError(f"{here}.field: not a vector field tangent to S: {gla.format(Y)}")
        flow.append((k, field_derivation(V, Y)))
    E = DerivationSpec.inner(gla, pi, 1)
    return Instance(name, V, E, flow, ctx, pi, data)


# --- emission --------------------------------------------------------------------

def _emit_vector(basis: GradedBasis, v: Vector) -> list:
    return [[basis.name(k), format_scalar(c)] for k, c in sorted(v.items())]


def _emit_poly(v: Vector) -> list:
    return [[list(e), [i + 1 for i in idx], format_scalar(c)] for (e, idx), c in sorted(v.items())]


def emit_instance(inst: Instance) -> dict:
    """JSON-ready description that reloads to an equivalent instance."""
    out: dict = {"name": inst.name}
    if inst.is_poisson:
        ctx = inst.ctx
        out["poisson"] = {
            "dim": ctx.dim, "tangent": ctx.tangent, "D": ctx.D, "D_tan": ctx.D_tan,
            "names": list(inst.V.gla.names),
            "bivector": _emit_poly(inst.pi),
            "flow": [{"order": k, "field": _emit_poly(m.p_element)} for k, m in inst.flow],
        }
        return out
    gla = inst.V.gla
    basis = gla.basis
    out["basis"] = [[n, d] for n, d in basis.elements]
    out["brackets"] = [[basis.name(i), basis.name(j), _emit_vector(basis, v)]
                       for (i, j), v in sorted(gla.table.items())]
    out["abelian"] = [basis.name(k) for k in inst.V.a_letters]
    out["degree"] = inst.E.degree
    out["P"] = _emit_vector(basis, inst.E.p_element)
    if inst.E.ehat is not None:
        out["Ehat"] = _emit_map(basis, inst.E.ehat)
    mt = []
    for k, m in inst.flow:
        if m.ehat is not None:
            mt.append({"order": k, "map": _emit_map(basis, m.ehat)})
        else:
            mt.append({"order": k, "inner": _emit_vector(basis, m.p_element)})
    out["mt"] = mt
    return out


def _emit_map(basis: GradedBasis, L: LinMap) -> dict:
    cols = {}
    for i in range(len(basis)):
        col = L.column(i)
        if col:
            cols[basis.name(i)] = _emit_vector(basis, col)
    return cols


def dump_instance(inst: Instance) -> str:
    """One top-level field per line, values compact; output is deterministic."""
    data = emit_instance(inst)
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in data.items())
    return "{\n" + body + "\n}\n"


# --- fixtures --------------------------------------------------------------------

def poisson_data(name: str, dim: int, tangent: int, bivector: list, flow: list | None = None,
                 names: list | None = None, D: int = 1, D_tan: int = 1) -> dict:
    sec = {"dim": dim, "tangent": tangent, "D": D, "D_tan": D_tan,
           "bivector": bivector, "flow": flow or []}
    if names:
        sec["names"] = names
    return {"name": name, "poisson": sec}


_R2 = [[[0, 0], [1, 2], "1"]]
_SYM4 = [[[0, 0, 0, 0], [1, 3], "1"], [[0, 0, 0, 0], [2, 4], "1"]]
_SYM4_SPLIT = [[[0, 0, 0, 0], [1, 2], "1"], [[0, 0, 0, 0], [3, 4], "1"]]

_FIXTURES: dict[str, dict] = {
    "r2-xy_dy": poisson_data("r2-xy_dy", 2, 1, _R2, [{"order": 0, "field": [[[1, 1], [2], "1"]]}],
                             ["x", "y"]),
    "r2-y_dx": poisson_data("r2-y_dx", 2, 1, _R2, [{"order": 0, "field": [[[0, 1], [1], "1"]]}],
                            ["x", "y"]),
    "r2-y2_dy": poisson_data("r2-y2_dy", 2, 1, _R2, [{"order": 0, "field": [[[0, 2], [2], "1"]]}],
                             ["x", "y"]),
    "r2-mixed": poisson_data("r2-mixed", 2, 1, _R2, [
        {"order": 0, "field": [[[1, 1], [2], "1"]]},
        {"order": 1, "field": [[[0, 1], [1], "2"], [[0, 2], [2], "-1/2"]]}], ["x", "y"]),
    "sym4-x3_d1": poisson_data("sym4-x3_d1", 4, 2, _SYM4,
                               [{"order": 0, "field": [[[0, 0, 1, 0], [1], "1"]]}]),
    "sym4-x1x3_d3": poisson_data("sym4-x1x3_d3", 4, 2, _SYM4,
                                 [{"order": 0, "field": [[[1, 0, 1, 0], [3], "1"]]}]),
    "sym4-x3x4_d4": poisson_data("sym4-x3x4_d4", 4, 2, _SYM4,
                                 [{"order": 0, "field": [[[0, 0, 1, 1], [4], "1"]]}]),
    "point-x1_d2": poisson_data("point-x1_d2", 2, 0, _R2,
                                [{"order": 0, "field": [[[1, 0], [2], "1"]]}]),
    "point-x1sq_d1": poisson_data("point-x1sq_d1", 2, 0, _R2,
                                  [{"order": 0, "field": [[[2, 0], [1], "1"]]}]),
    "sym4-noncoiso": poisson_data("sym4-noncoiso", 4, 2, _SYM4_SPLIT,
                                  [{"order": 0, "field": [[[0, 0, 1, 0], [1], "1"]]}]),
}


def fixture_names() -> list[str]:
    return sorted(_FIXTURES) + ["incidence"]


def fixture(name: str) -> Instance:
    if name == "incidence":
        return random_incidence(random.Random(0), mc=True, name="incidence")
    try:
        data = _FIXTURES[name]
    except KeyError:
        raise InstanceError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}") from None
    return parse_instance(json.loads(json.dumps(data)), name)


# --- random instances ------------------------------------------------------------

def _rand_coeff(rng: random.Random, zero_ok: bool = True) -> Fraction:
    choices = [-3, -2, -1, 1, 2, 3] + ([0] if zero_ok else [])
    return Fraction(rng.choice(choices), rng.choice([1, 1, 2]))


def random_incidence(rng: random.Random, mc: bool = True, name: str = "random-incidence",
                     with_flow: bool = True) -> Instance:
    """Draw from :func:`_incidence_draw`; without ``mc`` redraw until ``E o E != 0``."""
    while True:
        inst = _incidence_draw(rng, mc, name, with_flow)
        if mc or not is_maurer_cartan(inst.V, inst.E)[0]:
            return inst


def _incidence_draw(rng: random.Random, mc: bool, name: str, with_flow: bool) -> Instance:
    """Graded incidence algebra of a random partial order on 3-4 points.

    Basis: matrix units ``e_ij`` (``i <= j``) of degree ``d_i - d_j`` with the
    graded commutator.  Splitting the points as ``X + Y`` gives ``a`` = units
    from X to Y.  With ``mc`` all degrees are 0 or 1, so every degree-1 element
    squares to zero and ``E = ad(Z)`` is Maurer-Cartan.
    """
    while True:
        n = rng.choice([3, 4])
        degs = [rng.choice([0, 1] if mc else [0, 1, 2]) for _ in range(n)]
        rel = {(i, i) for i in range(n)}
        rel |= {(i, j) for i, j in combinations(range(n), 2) if rng.random() < 0.7}
        changed = True
        while changed:
            new = {(i, l) for (i, j) in rel for (k, l) in rel if j == k}
            changed = not new <= rel
            rel |= new
        X = {i for i in range(n) if rng.random() < 0.5}
        units = sorted(rel)
        a_units = [(i, j) for i, j in units if i in X and j not in X]
        odd = [(i, j) for i, j in units if degs[i] - degs[j] == 1]
        if a_units and odd and len(units) <= 10:
            break
    names = {u: f"e{u[0] + 1}{u[1] + 1}" for u in units}
    deg = {u: degs[u[0]] - degs[u[1]] for u in units}

    def product(u, v):
        return (u[0], v[1]) if u[1] == v[0] else None

    brackets = []
    for ia, u in enumerate(units):
        for v in units[ia:]:
            terms = {}
            uv, vu = product(u, v), product(v, u)
            if uv is not None:
                terms[uv] = terms.get(uv, 0) + 1
            if vu is not None:
                terms[vu] = terms.get(vu, 0) - koszul(deg[u], deg[v])
            terms = {w: c for w, c in terms.items() if c}
            if terms:
                brackets.append([names[u], names[v], [[names[w], str(c)] for w, c in sorted(terms.items())]])

    def element(choices):
        return [[names[u], format_scalar(c)] for u in choices
                for c in [_rand_coeff(rng, zero_ok=False)]]

    p_odd = [u for u in odd if u not in a_units]
    data: dict = {"name": name, "basis": [[names[u], deg[u]] for u in units],
                  "brackets": brackets, "abelian": [names[u] for u in a_units], "degree": 1}
    if mc:
        Zp = element(p_odd)
        data["P"] = element([u for u in odd if u in a_units])
    else:
        Zp = element(rng.sample(p_odd, min(len(p_odd), 2)))
        data["P"] = element(rng.sample(odd, min(len(odd), 3)))
    pre = parse_instance({k: data[k] for k in ("basis", "brackets", "abelian")}, name)
    ad = pre.V.gla.ad(_named_vector(pre.V.gla.basis, Zp, "Zp"), 1)
    data["Ehat"] = {names[u]: _emit_vector(pre.V.gla.basis, ad.column(k))
                    for k, u in enumerate(units) if ad.column(k)}
    data["mt"] = []
    if with_flow:
        even_p = [u for u in units if deg[u] == 0 and u not in a_units and u[0] != u[1]]
        if even_p:
            data["mt"].append({"order": 0, "inner": element(rng.sample(even_p, min(2, len(even_p))))})
            data["mt"].append({"order": 1, "inner": element(rng.sample(even_p, 1))})
    return parse_instance(data, name)


def _random_poly(rng: random.Random, nvars: int, max_deg: int, var_subset=None,
                 constant: bool | None = None) -> list:
    """Terms ``[exps, coeff]`` of a random polynomial in the chosen variables."""
    var_subset = list(range(nvars)) if var_subset is None else list(var_subset)
    terms = {}
    for _ in range(rng.randint(1, 3)):
        exps = [0] * nvars
        for _ in range(rng.randint(1, max_deg)):
            exps[rng.choice(var_subset)] += 1
        terms[tuple(exps)] = _rand_coeff(rng, zero_ok=False)
    if constant is None:
        constant = rng.random() < 0.5
    if constant:
        terms[(0,) * nvars] = _rand_coeff(rng, zero_ok=False)
    return [[list(e), c] for e, c in sorted(terms.items())]


def random_poisson(rng: random.Random, codim: int, name: str | None = None) -> Instance:
    """Random exactly-Poisson bivector on a coordinate submanifold of the given codimension."""
    kind = rng.choice({0: ["2d"], 1: ["2d", "3d"], 2: ["2d", "3d", "4d-const", "4d-mixed"]}[codim])
    if kind == "2d":
        dim = 2
        biv = [[e, [1, 2], format_scalar(c)] for e, c in _random_poly(rng, 2, 2)]
    elif kind == "3d":
        dim = 3
        biv = [[e, [1, 2], format_scalar(c)] for e, c in _random_poly(rng, 3, 2, [2])]
    else:
        dim = 4
        pairs = list(combinations(range(1, 5), 2))
        if kind == "4d-const":
            chosen = rng.sample(pairs, rng.randint(1, 4))
            biv = [[[0] * 4, list(p), format_scalar(_rand_coeff(rng, False))] for p in chosen]
        else:
            biv = [[e, [1, 2], format_scalar(c)] for e, c in _random_poly(rng, 4, 2, [0, 1])]
            if rng.random() < 0.5:
                biv.append([[0] * 4, [3, 4], format_scalar(_rand_coeff(rng, False))])
    tangent = dim - codim
    name = name or f"random-poisson-{kind}-codim{codim}"
    return parse_instance(poisson_data(name, dim, tangent, biv), name)
