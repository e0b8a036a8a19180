"""Twisted modules built as shift-operator chains over a vacuum module.

A TwistedModule keeps the untwisted module as its underlying space and a
tuple of validated shift operators.  Its vertex operator is the untwisted
one applied to the chain-transformed state:

    Y_new(v, x) w  =  Y(D_1(x) ... D_k(x) v, x) w,

with the most recent operator acting on v first.  Everything stays exact:
series come back as LogSeries of PBWVectors trusted up to an explicit
ceiling, and mode extraction reads single coefficients out of those.

The attached automorphism is tracked as structured data (semisimple part,
nilpotent part, optional diagram factor and conjugator).  Its action on
module vectors uses cyclotomic scalars: an eigencomponent of eigenvalue
lam picks up zeta_D^(-D lam), and the unipotent factor expands in the
formal 2*pi*i symbol carried by Cyc.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from math import floor, lcm

from .delta import DeltaOperator, delta_apply_series, make_delta
from .errors import DomainError, NotFixed, NotIntertwining, Unsupported
from .fock import InducedModule, PBWVector, monomial_weight
from .lie import AutomorphismData, GAutomorphism, LieElt
from .scalars import Cyc, fmt_rational, parse_rational, scalar_is_zero, scalars_equal
from .series import LogSeries

__all__ = [
    "TwistedModule",
    "ModuleMap",
    "ExternalTwistedModule",
    "untwisted_as_twisted",
    "make_twisted",
    "transport_tau",
    "functor_on_map",
    "mode_table_entry",
    "export_twisted",
    "load_twisted",
]

F = Fraction


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


class TwistedModule:
    """A chain of shift operators over an untwisted vacuum module."""

    def __init__(self, base: InducedModule, steps=(), aut: AutomorphismData = None,
                 conjugator: GAutomorphism = None):
        self.base = base
        self.steps = tuple(steps)
        self.aut = aut if aut is not None else AutomorphismData.identity(base.algebra)
        self.conjugator = conjugator
        self._coord_matrix_cache = None

    @property
    def algebra(self):
        return self.base.algebra

    @property
    def level(self):
        return self.base.level

    def branch_order(self) -> int:
        """Smallest D with all mode classes in (1/D) * integers."""
        d = 1
        for step in self.steps:
            for lam in step.eig.values:
                d = lcm(d, F(lam).denominator)
        return d

    # -- vertex operators ------------------------------------------------

    def chain_transform(self, v: PBWVector) -> LogSeries:
        """The full shift-chain image of v, an exact finite LogSeries."""
        ser = LogSeries()
        if self.conjugator is not None:
            v = apply_lie_matrix(self.base, self.conjugator.inverse().matrix, v)
        if not v.is_zero() or v.truncated:
            ser.add_term(F(0), 0, v)
        for step in reversed(self.steps):
            ser = delta_apply_series(step, ser)
        return ser

    def vertex_series(self, v: PBWVector, w: PBWVector, ceiling) -> LogSeries:
        ceiling = F(ceiling)
        out = LogSeries(ceiling=ceiling)
        for (e1, k1), vec1 in self.chain_transform(v).terms.items():
            sub_ceiling = floor(ceiling - e1)
            base_ser = self.base.vertex_series(vec1, w, sub_ceiling)
            for (e2, _k2), vec2 in base_ser.terms.items():
                if e1 + e2 <= ceiling:
                    out.add_term(e1 + e2, k1, vec2)
        return out

    def mode(self, v: PBWVector, m, l: int = 0):
        """The (m, l) mode of Y_new(v, x): coefficient of x^(-m-1) log^l."""
        e = -F(m) - 1

        def op(w: PBWVector) -> PBWVector:
            ser = self.vertex_series(v, w, ceiling=e)
            got = ser.terms.get((e, int(l)))
            return got if got is not None else PBWVector()

        return op

    def gen_mode(self, b, m, l: int = 0):
        return self.mode(self.base.current(self.base._as_elt(b)), m, l)

    # -- grading ----------------------------------------------------------

    def _step_eigenvalue(self, j: int, gi: int) -> Fraction:
        lam = self.steps[j].eig.eigenvalue_of(self.algebra._basis_elt(gi))
        if lam is None:
            raise Unsupported(
                "grading needs every generator to be an eigenvector of each "
                "step's semisimple part")
        return lam

    def _zero_mode_shift(self, j: int) -> Fraction:
        """Scalar part of s_j(0) accumulated from the earlier steps."""
        s_j = self.steps[j].s
        total = F(0)
        for i in range(j):
            total += self.algebra.form(self.steps[i].a, s_j) * self.level
        return total

    def weight_of(self, mono) -> Fraction:
        """Conformal weight of a monomial in the fully twisted grading."""
        w = F(monomial_weight(mono))
        for j in range(len(self.steps)):
            beta = -self._zero_mode_shift(j)
            for gi, _m in mono:
                beta += self._step_eigenvalue(j, gi)
            w = w - beta + self.steps[j].kappa / 2
        return w

    def class_of(self, mono) -> Fraction:
        """Accumulated grading-class offset of a monomial (exact, not mod 1)."""
        cls = F(0)
        for j in range(len(self.steps)):
            cls -= self._zero_mode_shift(j)
            for gi, _m in mono:
                cls += self._step_eigenvalue(j, gi)
        return cls

    # -- the attached automorphism ----------------------------------------

    def automorphism_matrix(self):
        """Coordinate matrix of the attached automorphism, with Cyc entries
        wherever a root of unity or the formal 2*pi*i symbol is needed."""
        if self._coord_matrix_cache is None:
            self._coord_matrix_cache = _aut_coord_matrix(self.algebra, self.aut,
                                                         self.branch_order())
        return self._coord_matrix_cache

    def automorphism_apply(self, vec: PBWVector) -> PBWVector:
        return apply_lie_matrix(self.base, self.automorphism_matrix(), vec)


def untwisted_as_twisted(module: InducedModule) -> TwistedModule:
    return TwistedModule(module, (), AutomorphismData.identity(module.algebra))


def _aut_coord_matrix(alg, aut: AutomorphismData, order: int):
    dim = alg.dim
    cols = []
    semi = aut.inner_semisimple_part
    nil = aut.inner_nilpotent_part
    eig = alg.ad_eigendata(semi) if semi is not None and not semi.is_zero() else None
    for gi in range(dim):
        elt = alg._basis_elt(gi)
        if aut.conjugator is not None:
            elt = aut.conjugator.inverse()(elt)
        # semisimple factor: eigencomponent lam scales by zeta^(-D lam)
        pieces = []
        if eig is not None:
            for lam, comp in eig.decompose(elt).items():
                dl = F(lam) * order
                if dl.denominator != 1:
                    raise DomainError("branch order does not clear an eigenvalue")
                pieces.append((Cyc.zeta(order, -int(dl)), comp))
        else:
            pieces.append((F(1), elt))
        # unipotent factor: sum_k (-T)^k ad_nil^k / k!
        expanded = []
        for scale, comp in pieces:
            if nil is not None and not nil.is_zero():
                cur, k = comp, 0
                while not cur.is_zero():
                    tfac = Cyc.t_power(k, 1) * F((-1) ** k, _factorial(k))
                    expanded.append((scale * tfac, cur))
                    cur = alg.bracket(nil, cur)
                    k += 1
            else:
                expanded.append((scale, comp))
        # diagram factor and the conjugator on the way out
        col = [F(0)] * dim
        for scale, comp in expanded:
            if aut.diagram_part is not None:
                comp = aut.diagram_part(comp)
            if aut.conjugator is not None:
                comp = aut.conjugator(comp)
            for gj, c in enumerate(comp.coords):
                if c:
                    col[gj] = col[gj] + scale * c
        cols.append(col)
    # rows indexed by target generator, columns by source
    return [[cols[src][dst] for src in range(dim)] for dst in range(dim)]


def apply_lie_matrix(module: InducedModule, matrix, vec: PBWVector) -> PBWVector:
    """Extend a generator-level linear map multiplicatively over monomials."""
    dim = module.algebra.dim

    def expand(mono):
        if not mono:
            return module.vacuum()
        (gi, m), rest = mono[0], mono[1:]
        tail = expand(rest)
        out = PBWVector({}, tail.truncated)
        for gj in range(dim):
            c = matrix[gj][gi]
            if scalar_is_zero(c):
                continue
            moved = module.apply_mode(module.algebra._basis_elt(gj), m, tail)
            if moved.is_zero() and not moved.truncated:
                continue
            out = out + c * moved
        return out

    total = PBWVector({}, vec.truncated)
    for mono, coeff in vec.c.items():
        total = total + coeff * expand(mono)
    return total


def make_twisted(target, u: PBWVector,
                 legacy_sign_convention: bool = False) -> TwistedModule:
    """Extend a (possibly already twisted) module by one shift operator.

    The current vector u must be fixed by the attached automorphism of the
    target, otherwise NotFixed is raised.  The automorphism data of the
    result is the merged product; combinations the structured data cannot
    express raise Unsupported.
    """
    if isinstance(target, InducedModule):
        target = untwisted_as_twisted(target)
    delta = make_delta(target.base, u, legacy_sign_convention)

    if not delta.is_identity:
        image = target.automorphism_apply(u)
        diff = image - u
        if not diff.is_zero():
            raise NotFixed(
                "the current vector is not fixed by the attached automorphism")

    aut = _merge_aut(target.algebra, target.aut, delta)
    return TwistedModule(target.base, target.steps + (delta,), aut,
                         target.conjugator)


def _merge_aut(alg, aut: AutomorphismData, delta: DeltaOperator) -> AutomorphismData:
    s_u, n_u = delta.s, delta.n
    h = aut.inner_semisimple_part if aut.inner_semisimple_part is not None else alg.zero()
    n = aut.inner_nilpotent_part if aut.inner_nilpotent_part is not None else alg.zero()

    if not alg.bracket(h, s_u).is_zero():
        raise Unsupported("semisimple parts of the automorphisms do not commute")
    if not alg.bracket(n, n_u).is_zero():
        raise Unsupported("nilpotent parts of the automorphisms do not commute")
    # the exponentiated semisimple factor of the new step must fix the old
    # nilpotent part: every eigencomponent needs an integer eigenvalue
    if not n.is_zero() and not s_u.is_zero():
        for lam, comp in alg.ad_eigendata(s_u).decompose(n).items():
            if not comp.is_zero() and F(lam).denominator != 1:
                raise Unsupported(
                    "the new semisimple factor moves the old nilpotent part")
    h2 = h + s_u
    n2 = n + n_u
    if not n2.is_zero() and not h2.is_zero():
        for lam, comp in alg.ad_eigendata(h2).decompose(n2).items():
            if not comp.is_zero() and F(lam).denominator != 1:
                raise Unsupported(
                    "merged semisimple factor does not fix the merged nilpotent part")
    return replace(aut,
                   inner_semisimple_part=None if h2.is_zero() else h2,
                   inner_nilpotent_part=None if n2.is_zero() else n2)


def transport_tau(twisted: TwistedModule, tau: GAutomorphism) -> TwistedModule:
    """Conjugate the construction by a Lie algebra automorphism.

    The transported vertex operator feeds tau^(-1) v into the original one;
    the attached automorphism is conjugated accordingly.
    """
    if isinstance(twisted, InducedModule):
        twisted = untwisted_as_twisted(twisted)
    old = twisted.conjugator
    new_conj = tau if old is None else tau.compose(old)
    aut = replace(twisted.aut, conjugator=new_conj)
    return TwistedModule(twisted.base, twisted.steps, aut, new_conj)


# -- graded module maps and their transport --------------------------------


class ModuleMap:
    """A weight-diagonal linear map of the underlying space."""

    def __init__(self, module: InducedModule, default=F(1), weight_scalars=None):
        self.module = module
        self.default = default
        self.weight_scalars = dict(weight_scalars or {})

    def scalar_at(self, weight):
        return self.weight_scalars.get(int(weight), self.default)

    def apply(self, vec: PBWVector) -> PBWVector:
        out = PBWVector({}, vec.truncated)
        for w, comp in vec.weight_components().items():
            out = out + self.scalar_at(w) * comp
        return out

    def is_identity(self):
        return self.default == 1 and all(v == 1 for v in self.weight_scalars.values())


def functor_on_map(source: TwistedModule, target: TwistedModule, mapping: ModuleMap,
                   probe_weight: int = 2, ceiling: int = 2) -> ModuleMap:
    """Transport a graded map along the twisting functor.

    The underlying space does not change, so the transported map is the
    same assignment; what needs checking is that it still intertwines the
    twisted actions.  Probes run over current vectors against the basis up
    to probe_weight; a violation raises NotIntertwining.
    """
    alg = source.base.algebra
    probes = [source.base.current(alg._basis_elt(gi)) for gi in range(alg.dim)]
    for v in probes:
        for w in range(probe_weight + 1):
            for mono in source.base.basis(w):
                bv = PBWVector({mono: F(1)})
                left = source.vertex_series(v, mapping.apply(bv), ceiling)
                right = target.vertex_series(v, bv, ceiling)
                mapped = LogSeries(floor=right.floor, ceiling=right.ceiling)
                for key, vec in right.terms.items():
                    mapped.add_term(key[0], key[1], mapping.apply(vec))
                for key in set(left.terms) | set(mapped.terms):
                    a = left.terms.get(key, PBWVector())
                    b = mapped.terms.get(key, PBWVector())
                    if not (a - b).is_zero():
                        raise NotIntertwining(
                            f"map fails to intertwine at series key {key}")
    return ModuleMap(target.base, mapping.default, mapping.weight_scalars)


# -- closed-form mode tables ------------------------------------------------


def mode_table_entry(twisted: TwistedModule, b, m, l: int = 0):
    """The twisted mode b_(m, l) written over untwisted modes.

    Returns (ops, scalar) with ops a dict {(generator index, integer mode):
    coefficient} and scalar the accumulated multiple of the identity, so

        b_(m, l)  =  sum ops[gi, mode] * b_gi(mode)  +  scalar * Id.
    """
    elt = twisted.base._as_elt(b)
    ops, scalar = _fold_mode(twisted, len(twisted.steps), elt, F(m), int(l))
    return ops, scalar


def _fold_mode(twisted: TwistedModule, j: int, elt: LieElt, m, l: int):
    alg = twisted.algebra
    if elt.is_zero():
        return {}, F(0)
    if j == 0:
        if l != 0 or F(m).denominator != 1:
            return {}, F(0)
        ops = {(gi, int(m)): c for gi, c in enumerate(elt.coords) if c}
        return ops, F(0)
    step = twisted.steps[j - 1]
    ops_total = {}
    scalar_total = F(0)
    for lam, comp in step.eig.decompose(elt).items():
        cur = comp
        for lp in range(0, l + 1):
            if cur.is_zero():
                break
            c = F((-1) ** lp, _factorial(lp))
            sub_ops, sub_scalar = _fold_mode(twisted, j - 1, cur, F(m) - lam, l - lp)
            for key, val in sub_ops.items():
                got = ops_total.get(key)
                tot = c * val if got is None else got + c * val
                if scalar_is_zero(tot):
                    ops_total.pop(key, None)
                else:
                    ops_total[key] = tot
            scalar_total += c * sub_scalar
            cur = alg.bracket(step.n, cur)
    if F(m) == 0 and l == 0:
        scalar_total -= alg.form(step.a, elt) * twisted.level
    return ops_total, scalar_total


def apply_table_entry(module: InducedModule, entry, vec: PBWVector) -> PBWVector:
    ops, scalar = entry
    out = scalar * vec
    for (gi, mode), coeff in ops.items():
        out = out + coeff * module.apply_mode(module.algebra._basis_elt(gi),
                                              mode, vec)
    return out


# -- external JSON-facing form ----------------------------------------------


def export_twisted(twisted: TwistedModule, mode_window=None) -> dict:
    """Serialize the construction to plain JSON data (rationals as "p/q").

    If mode_window = (modes, l_max) is given, closed-form mode tables for
    every generator over those modes are included, which is what the
    detached ExternalTwistedModule consumes.
    """
    alg = twisted.algebra
    if twisted.conjugator is not None:
        raise Unsupported("conjugated constructions are not serialized")
    data = {
        "schemaVersion": 1,
        "algebra": {"family": alg.family, "rank": alg.rank},
        "level": fmt_rational(twisted.level),
        "cutoff": fmt_rational(twisted.base.cutoff),
        "branchOrder": twisted.branch_order(),
        "chain": [
            {
                "current": {alg.names[gi]: fmt_rational(c)
                            for gi, c in enumerate(step.a.coords) if c},
                "legacySign": bool(step.legacy),
            }
            for step in twisted.steps
        ],
    }
    if mode_window is not None:
        modes, l_max = mode_window
        tables = []
        for gi in range(alg.dim):
            for m in modes:
                for l in range(l_max + 1):
                    ops, scalar = mode_table_entry(twisted, alg._basis_elt(gi),
                                                   F(m), l)
                    if not ops and scalar == 0:
                        continue
                    tables.append({
                        "generator": alg.names[gi],
                        "mode": fmt_rational(F(m)),
                        "logPower": l,
                        "ops": [
                            {"generator": alg.names[gj],
                             "mode": fmt_rational(F(mm)),
                             "coefficient": fmt_rational(c)}
                            for (gj, mm), c in sorted(ops.items())
                        ],
                        "scalar": fmt_rational(scalar),
                    })
        data["modeTables"] = tables
    return data


def load_twisted(data: dict, build_module_fn=None) -> TwistedModule:
    """Rebuild a twisted module by replaying the serialized chain."""
    from .fock import build_module
    from .lie import build_simple_lie

    if data.get("schemaVersion") != 1:
        raise DomainError("unknown schema version")
    alg = build_simple_lie(data["algebra"]["family"], data["algebra"]["rank"])
    module = (build_module_fn or build_module)(
        alg, parse_rational(data["level"]), parse_rational(data["cutoff"]))
    twisted = untwisted_as_twisted(module)
    for entry in data["chain"]:
        coords = {name: parse_rational(c) for name, c in entry["current"].items()}
        u = module.current(alg.element(coords))
        twisted = make_twisted(twisted, u, entry.get("legacySign", False))
    return twisted


class ExternalTwistedModule:
    """A twisted module reconstituted from serialized mode tables only.

    It can apply the serialized twisted modes and evaluate vertex operators
    of current vectors (depth one); anything deeper needs the shift-chain
    machinery it deliberately does not carry, so that raises Unsupported.
    """

    def __init__(self, data: dict):
        from .fock import build_module
        from .lie import build_simple_lie

        if data.get("schemaVersion") != 1:
            raise DomainError("unknown schema version")
        if "modeTables" not in data:
            raise DomainError("serialized form carries no mode tables")
        self.algebra = build_simple_lie(data["algebra"]["family"],
                                        data["algebra"]["rank"])
        self.module = build_module(self.algebra, parse_rational(data["level"]),
                                   parse_rational(data["cutoff"]))
        self.branch_order = int(data["branchOrder"])
        self.tables = {}
        for row in data["modeTables"]:
            key = (row["generator"], parse_rational(row["mode"]), row["logPower"])
            ops = {(self.algebra.index[op["generator"]],
                    int(parse_rational(op["mode"]))): parse_rational(op["coefficient"])
                   for op in row["ops"]}
            self.tables[key] = (ops, parse_rational(row["scalar"]))

    def mode(self, gen_name: str, m, l: int = 0):
        entry = self.tables.get((gen_name, F(m), int(l)), ({}, F(0)))

        def op(w: PBWVector) -> PBWVector:
            return apply_table_entry(self.module, entry, w)

        return op

    def vertex_series(self, v: PBWVector, w: PBWVector, ceiling) -> LogSeries:
        names = []
        for mono, coeff in v.c.items():
            if len(mono) != 1 or mono[0][1] != -1:
                raise Unsupported(
                    "the detached form only evaluates depth-one state vectors")
            names.append((self.algebra.names[mono[0][0]], coeff))
        ceiling = F(ceiling)
        out = LogSeries(ceiling=ceiling)
        for (gen, m, l), entry in self.tables.items():
            e = -F(m) - 1
            if e > ceiling:
                continue
            for name, coeff in names:
                if name != gen:
                    continue
                res = coeff * apply_table_entry(self.module, entry, w)
                if not res.is_zero() or res.truncated:
                    out.add_term(e, l, res)
        return out
