"""Construct explicit factored-joint witnesses and verify systems against them.

The full pipeline turns a valid periodic tiling into two mirrored colored
tori (positive and negative signed colors), takes a uniform random vertex of
their union as the core seed, and then assigns every auxiliary variable of
the compiled system a deterministic table over the seeds, driven by the
compiler's build index:

  * uniform partners realize each three-way sum block by a fresh uniform
    seed and a modular sum;
  * cycle-coloring auxiliaries two-color the edges of the characteristic
    bipartite graph;
  * flip auxiliaries index the four support atoms and split the residual
    three-atom uncertainty with fresh three-point seeds;
  * group-counting auxiliaries are built from the exact conditional law of
    the coin given the selected observables, splitting each event class
    uniformly onto a block of seed values.  When the law is not realizable
    as a function of the gadget's seed size the builder refuses with an
    exact rational report.

All seed probabilities are exact rationals; verification evaluates the rows
in floating point against explicit tolerances.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm

import numpy as np

from .compiler import SparseAffineSystem, compile_ttori_indexed
from .expressions import REL_EQ, REL_GE
from .gadgets import BuildIndex, CycsIx, FlipIx, SatIx, SwIx, UnifIx, w_of_color
from .joint import FactoredJoint, Seed, Variable, binary_entropy, eval_expression, uniform_seed
from .systems import ConstraintSystem
from .tiling import PeriodicTiling, TileSet, validate_tiling

FLIP_ATOMS = ((0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 0, 1))

UNIT_TOL = 1e-9
END_TO_END_TOL = 1e-6


class WitnessError(ValueError):
    pass


class WitnessRefusal(WitnessError):
    """Raised when a group-counting auxiliary cannot exist.

    Carries the exact rational conditional law of the coin on the offending
    group and the fractional split the seed would have to realize.
    """

    def __init__(self, path: str, seed_size: int, event, group_size: int, sat_count: int):
        self.path = path
        self.seed_size = seed_size
        self.event = event
        self.group_size = group_size
        self.sat_count = sat_count
        self.law = Fraction(sat_count, group_size + sat_count)
        self.required_split = Fraction(seed_size * sat_count, group_size + sat_count)
        super().__init__(
            f"{path}: group {event} has {sat_count} selected of {group_size} vertices; "
            f"the coin is Bernoulli({self.law}) there, which needs {self.required_split} "
            f"of {seed_size} seed values: not an integer, no such auxiliary exists"
        )


# --- colored tori ---


@dataclass(frozen=True)
class ColoredTorus:
    side: int
    sign: int
    colors: dict  # (p, q) -> signed color

    def color(self, p: int, q: int) -> int:
        return self.colors[(p % self.side, q % self.side)]


GROUP_BY_PARITY = {(0, 0): 4, (1, 0): 3, (0, 1): 1, (1, 1): 2}


def vertex_group(p: int, q: int) -> int:
    return GROUP_BY_PARITY[(p % 2, q % 2)]


def tiling_to_colored_tori(ts: TileSet, til: PeriodicTiling, k: int) -> tuple[ColoredTorus, ColoredTorus]:
    """Two mirrored colored tori of side 2l from a valid tiling.

    l is lcm(a, b) inflated to at least 2, so every support cycle is
    nondegenerate.  Vertex (p, q) takes its color from the even face it
    belongs to: the west edge of the face at (p, q) when p + q is even,
    otherwise the south edge of the face at (p - 1, q).  The color group
    (1..4) is determined by the parities of (p, q).
    """
    if not validate_tiling(ts, til):
        raise WitnessError("tiling is not valid; refusing to build a coloring")
    t_eff = (k - 1) // 4
    if ts.num_colors > t_eff:
        raise WitnessError(f"tile set has {ts.num_colors} colors but k={k} supports {t_eff}")
    l = max(2, lcm(til.a, til.b))
    side = 2 * l

    def base_color(p: int, q: int) -> int:
        if (p + q) % 2 == 0:
            i, j = p, q
            edge = 3  # west
        else:
            i, j = p - 1, q
            edge = 2  # south
        u = ((i + j) // 2) % til.a
        v = ((j - i) // 2) % til.b
        c = ts.tiles[til.tile_at(u, v)][edge]
        return 4 * (c - 1) + vertex_group(p, q)

    colors = {(p, q): base_color(p, q) for p in range(side) for q in range(side)}
    pos = ColoredTorus(side, +1, colors)
    neg = ColoredTorus(side, -1, {pq: -c for pq, c in colors.items()})
    check_colored_tori(ts, k, pos, neg)
    return pos, neg


def check_colored_tori(ts: TileSet, k: int, pos: ColoredTorus, neg: ColoredTorus) -> None:
    """Structural invariants of a mirrored pair of colored tori."""
    from .compiler import face_sets

    side = pos.side
    if side % 2 or side < 4 or neg.side != side:
        raise WitnessError("colored tori must share an even side of at least 4")
    c11, c22 = face_sets(ts)
    for p in range(side):
        for q in range(side):
            c = pos.color(p, q)
            if c <= 0 or neg.color(p, q) != -c:
                raise WitnessError("copies must mirror with opposite signs")
            g = (c - 1) % 4 + 1
            if g != vertex_group(p, q):
                raise WitnessError(f"vertex ({p},{q}) has group {g}, expected {vertex_group(p, q)}")
            gv = (pos.color(p, q + 1) - 1) % 4 + 1
            if {g, gv} not in ({1, 4}, {2, 3}):
                raise WitnessError(f"vertical edge at ({p},{q}) joins groups {g},{gv}")
            gh = (pos.color(p + 1, q) - 1) % 4 + 1
            if {g, gh} not in ({1, 2}, {3, 4}):
                raise WitnessError(f"horizontal edge at ({p},{q}) joins groups {g},{gh}")
    for i in range(side):
        for j in range(side):
            if (i + j) % 2:
                continue
            face = frozenset(
                abs(pos.color(p, q)) for p, q in ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))
            )
            allowed = c11 if i % 2 == 0 else c22
            if face not in allowed:
                raise WitnessError(f"even face at ({i},{j}) has colors {sorted(face)} not admitted")
    for i in range(1, k + 1):
        ones = zeros = 0
        for torus in (pos, neg):
            for c in torus.colors.values():
                w = w_of_color(c, k)[i - 1]
                ones += w
                zeros += 1 - w
        if ones != zeros:
            raise WitnessError(f"switch index {i} unbalanced: {ones} ones vs {zeros} zeros")


# --- witness assembly ---


class WitnessAssigner:
    """Incrementally builds a FactoredJoint, seed by seed, table by table."""

    def __init__(self):
        self.seeds: list[Seed] = []
        self.sizes: dict[str, int] = {}
        self.vars: dict[str, Variable] = {}

    def add_seed(self, name: str, size: int, probs=None) -> str:
        if name in self.sizes:
            raise WitnessError(f"duplicate seed {name}")
        seed = uniform_seed(name, size) if probs is None else Seed(name, size, tuple(probs))
        self.seeds.append(seed)
        self.sizes[name] = size
        return name

    def seed_uniform(self, name: str) -> bool:
        for s in self.seeds:
            if s.name == name:
                return s.uniform
        raise WitnessError(f"unknown seed {name}")

    def assign(self, name: str, refs, table) -> None:
        if name in self.vars:
            raise WitnessError(f"variable {name} assigned twice")
        refs = tuple(refs)
        for r in refs:
            if r not in self.sizes:
                raise WitnessError(f"variable {name} references unknown seed {r}")
        arr = np.asarray(table, dtype=np.int64)
        if arr.size and 0 <= int(arr.min()):
            hi = int(arr.max())
            if hi < 256:
                arr = arr.astype(np.uint8)
            elif hi < 65536:
                arr = arr.astype(np.uint16)
        self.vars[name] = Variable(name, refs, arr)

    def value_array(self, name: str, order: list[str], coords) -> np.ndarray:
        v = self.vars[name]
        pos = {sn: i for i, sn in enumerate(order)}
        flat = np.zeros(len(coords[0]) if coords else 1, dtype=np.int64)
        stride = 1
        for sn in reversed(v.seeds):
            flat = flat + coords[pos[sn]] * stride
            stride *= self.sizes[sn]
        return np.take(np.asarray(v.table, dtype=np.int64), flat)

    def _enumerate(self, order: list[str]):
        total = 1
        for sn in order:
            total *= self.sizes[sn]
        idx = np.arange(total, dtype=np.int64)
        coords = []
        suffix = total
        for sn in order:
            suffix //= self.sizes[sn]
            coords.append((idx // suffix) % self.sizes[sn])
        return total, coords

    def derive(self, name: str, inputs: list[str], fn, extra_seeds=()) -> None:
        """Assign `name` = fn(input values..., extra seed values...).

        The table is row-major over the sorted union of the inputs' seeds
        with any extra seeds appended last (fastest)."""
        base = sorted({sn for iv in inputs for sn in self.vars[iv].seeds})
        order = base + list(extra_seeds)
        total, coords = self._enumerate(order)
        in_vals = [self.value_array(iv, order, coords) for iv in inputs]
        extra_vals = [coords[len(base) + i] for i in range(len(extra_seeds))]
        cols = [v.tolist() for v in in_vals + extra_vals]
        table = [fn(*row) for row in zip(*cols)] if cols else [fn()]
        self.assign(name, order, table)

    def derive_mod_sum(self, name: str, base_var: str, seed_name: str, size: int) -> None:
        """name = (base + seed) mod size; the standard third-leg table."""
        v = self.vars[base_var]
        table = (np.add.outer(np.asarray(v.table, dtype=np.int64), np.arange(size)) % size).ravel()
        self.assign(name, tuple(v.seeds) + (seed_name,), table)

    def exact_uniform_range(self, name: str) -> int:
        """Value count of `name`, verified exactly uniform over 0..count-1."""
        v = self.vars[name]
        if not all(self.seed_uniform(sn) for sn in v.seeds):
            raise WitnessError(f"{name}: uniformity check requires uniform seeds")
        vals = np.asarray(v.table, dtype=np.int64)
        lo, hi = (int(vals.min()), int(vals.max())) if len(vals) else (0, 0)
        if lo != 0:
            raise WitnessError(f"{name}: values must start at 0")
        size = hi + 1
        counts = np.bincount(vals, minlength=size)
        if not (counts == len(vals) // size).all() or len(vals) % size:
            raise WitnessError(f"{name}: not exactly uniform (counts {counts.tolist()})")
        return size

    def joint(self) -> FactoredJoint:
        return FactoredJoint(list(self.seeds), list(self.vars.values()))


# --- index-driven auxiliary assignment ---


def _assign_sw(asg: WitnessAssigner, sw: SwIx) -> None:
    seed = asg.add_seed(f"{sw.path}.seedG", 2)
    asg.derive(sw.g, [sw.f], lambda f, b: (1 - f) * b, extra_seeds=[seed])


def _assign_cycs(asg: WitnessAssigner, cx: CycsIx) -> None:
    """Two-color the edges of the characteristic bipartite graph of (x1, x2)."""
    order = sorted({sn for n in (cx.x1, cx.x2) for sn in asg.vars[n].seeds})
    if not all(asg.seed_uniform(sn) for sn in order):
        raise WitnessError(f"{cx.path}: cycle coloring requires uniform seeds")
    total, coords = asg._enumerate(order)
    a_vals = asg.value_array(cx.x1, order, coords)
    b_vals = asg.value_array(cx.x2, order, coords)
    counts: dict = {}
    for a, b in zip(a_vals.tolist(), b_vals.tolist()):
        counts[(a, b)] = counts.get((a, b), 0) + 1
    weights = set(counts.values())
    if len(weights) != 1:
        raise WitnessError(f"{cx.path}: support pairs are not equally likely")
    left: dict = {}
    right: dict = {}
    for a, b in counts:
        left.setdefault(a, []).append((a, b))
        right.setdefault(b, []).append((a, b))
    if any(len(es) != 2 for es in left.values()) or any(len(es) != 2 for es in right.values()):
        raise WitnessError(f"{cx.path}: characteristic graph is not 2-regular")
    color: dict = {}
    for start in sorted(counts):
        if start in color:
            continue
        edge, side, c = start, "right", 0
        while edge not in color:
            color[edge] = c
            a, b = edge
            nxt = [e for e in (right[b] if side == "right" else left[a]) if e != edge][0]
            edge, side, c = nxt, ("left" if side == "right" else "right"), 1 - c
    asg.derive(cx.u, [cx.x1, cx.x2], lambda a, b: color[(a, b)])


def _assign_flip(asg: WitnessAssigner, fl: FlipIx) -> None:
    atom_index = {atom: i for i, atom in enumerate(FLIP_ATOMS)}

    def u_fn(f, g1, g2):
        key = (f, g1, g2)
        if key not in atom_index:
            raise WitnessError(f"{fl.path}: combination {key} outside the flip support")
        return atom_index[key]

    asg.derive(fl.u, [fl.f, fl.g1, fl.g2], u_fn)
    z1_seed = asg.add_seed(f"{fl.path}.seedZ1", 3)
    z2_seed = asg.add_seed(f"{fl.path}.seedZ2", 3)
    rank_g1_zero = {0: 0, 2: 1, 3: 2}  # atoms with g1 = 0
    asg.derive(fl.z1, [fl.u], lambda u, r: rank_g1_zero[u] if u != 1 else r, extra_seeds=[z1_seed])
    asg.derive(fl.z2, [fl.u], lambda u, r: u if u != 3 else r, extra_seeds=[z2_seed])


def _assign_sat(asg: WitnessAssigner, sat: SatIx) -> None:
    """Build the group-counting auxiliary from the exact conditional law.

    Within each group (a value of the conditioning tuple) the coin given
    all-zero observables is Bernoulli(a/(l+a)) where l is the group size
    and a the number of selected vertices; the auxiliary maps the selected
    coin=1 mass onto a block of seed values of exactly matching size.
    """
    u = sat.u_size
    fvar = asg.vars[sat.f]
    if len(fvar.seeds) != 1 or sorted(np.asarray(fvar.table).tolist()) != [0, 1]:
        raise WitnessError(f"{sat.path}: the coin must be a fair single-seed bit")
    fseed = fvar.seeds[0]
    if not asg.seed_uniform(fseed):
        raise WitnessError(f"{sat.path}: the coin seed must be fair")
    sel = [sat.v[i - 1] for i in sat.s] + [sat.vb[i - 1] for i in sat.sbar]
    ctx = set(sat.evars) | set(sel)
    vseeds = sorted({sn for n in ctx for sn in asg.vars[n].seeds} - {fseed})
    for ev in sat.evars:
        if fseed in asg.vars[ev].seeds:
            raise WitnessError(f"{sat.path}: group variable {ev} depends on the coin seed")
    if not all(asg.seed_uniform(sn) for sn in vseeds):
        raise WitnessError(f"{sat.path}: group analysis requires uniform seeds")

    def value_at(name, coord):
        v = asg.vars[name]
        idx = 0
        for sn in v.seeds:
            idx = idx * asg.sizes[sn] + coord[sn]
        return int(v.table[idx])

    # classify vertex atoms
    vertex_info = []  # (event, satflag, pattern)
    ranges = [range(asg.sizes[sn]) for sn in vseeds]
    f_of = {int(i): int(x) for i, x in enumerate(np.asarray(fvar.table))}
    f1_coord = next(i for i, x in f_of.items() if x == 1)
    f0_coord = next(i for i, x in f_of.items() if x == 0)
    for atom in product(*ranges):
        coord = dict(zip(vseeds, atom))
        event = tuple(value_at(ev, coord) for ev in sat.evars)
        coord[fseed] = f0_coord
        if any(value_at(n, coord) != 0 for n in sel):
            raise WitnessError(f"{sat.path}: selected observable nonzero when the coin is 0")
        coord[fseed] = f1_coord
        pattern = tuple(value_at(n, coord) for n in sel)
        vertex_info.append((event, all(x == 0 for x in pattern), pattern))

    groups: dict = {}
    for rank, (event, satflag, pattern) in enumerate(vertex_info):
        groups.setdefault(event, []).append((rank, satflag, pattern))
    stats = {}
    refinements = []
    for event, members in sorted(groups.items()):
        lsize = len(members)
        acount = sum(1 for _, sf, _ in members if sf)
        num = u * acount
        den = lsize + acount
        if num % den:
            raise WitnessRefusal(sat.path, u, event, lsize, acount)
        m = num // den
        sat_rank = {}
        all_rank = {}
        pat_rank: dict = {}
        pat_count: dict = {}
        for t, (rank, sf, pattern) in enumerate(members):
            all_rank[rank] = t
            if sf:
                sat_rank[rank] = len(sat_rank)
            elif any(pattern):
                pat_rank[rank] = pat_count.get(pattern, 0)
                pat_count[pattern] = pat_rank[rank] + 1
        refinements.append(m // gcd(acount, m) if acount else 1)
        refinements.append((u - m) // gcd(lsize, u - m))
        for c in pat_count.values():
            refinements.append(u // gcd(c, u))
        stats[event] = (lsize, acount, m, sat_rank, all_rank, pat_rank, pat_count)

    M = lcm(*refinements) if refinements else 1
    base_order = sorted(vseeds + [fseed])
    order = list(base_order)
    if M > 1:
        order.append(asg.add_seed(f"{sat.path}.seedU", M))

    def block_value(t: int, r: int, count: int, m: int, offset: int) -> int:
        rr = m // gcd(count, m)
        return offset + ((t * rr + r % rr) * m) // (count * rr)

    table = []
    vertex_index = {
        atom: rank for rank, atom in enumerate(product(*ranges))
    }
    base_ranges = [range(asg.sizes[sn]) for sn in base_order]
    for atom in product(*base_ranges):
        coord = dict(zip(base_order, atom))
        rank = vertex_index[tuple(coord[sn] for sn in vseeds)]
        event, satflag, pattern = vertex_info[rank]
        lsize, acount, m, sat_rank, all_rank, pat_rank, pat_count = stats[event]
        fval = f_of[coord[fseed]]
        for r in range(M):
            if fval == 0:
                val = block_value(all_rank[rank], r, lsize, u - m, m)
            elif satflag:
                val = block_value(sat_rank[rank], r, acount, m, 0)
            else:
                val = block_value(pat_rank[rank], r, pat_count[pattern], u, 0)
            table.append(val)
    asg.assign(sat.uvar, tuple(order), table)


def _assign_unif_partner(asg: WitnessAssigner, ux: UnifIx) -> None:
    size = asg.exact_uniform_range(ux.var)
    if ux.card is not None and size != ux.card:
        raise WitnessError(f"{ux.path}: {ux.var} is uniform over {size} values, expected {ux.card}")
    seed = asg.add_seed(f"{ux.path}.seedP", size)
    asg.assign(ux.p1, (seed,), np.arange(size))
    asg.derive_mod_sum(ux.p2, ux.var, seed, size)


def assign_from_index(asg: WitnessAssigner, index: BuildIndex) -> None:
    """Assign every auxiliary variable recorded in a build index.

    Base variables (the gadget actuals) must already be assigned."""
    for sw in index.sws:
        _assign_sw(asg, sw)
    for cx in index.cycs:
        _assign_cycs(asg, cx)
    for fl in index.flips:
        _assign_flip(asg, fl)
    for sat in index.sats:
        _assign_sat(asg, sat)
    for ux in index.unifs:
        _assign_unif_partner(asg, ux)


# --- the full tiling witness ---


def build_witness(ts: TileSet, til: PeriodicTiling) -> FactoredJoint:
    """An explicit joint distribution satisfying the compiled system.

    The core seed is a uniform vertex of the two mirrored colored tori,
    realized as two sign-indexed cycles crossed with one cycle; the coin and
    every gadget amount to deterministic maps and fresh uniform seeds.
    """
    if not validate_tiling(ts, til):
        raise WitnessError("tiling is not valid")
    cs, index, lay = compile_ttori_indexed(ts)
    k = lay.k
    pos, neg = tiling_to_colored_tori(ts, til, k)
    side = pos.side
    l = side // 2
    asg = WitnessAssigner()
    core = asg.add_seed("core", 2 * side * side)
    coin = asg.add_seed("coinF", 2)

    def split(idx):
        s, rem = divmod(idx, side * side)
        p, q = divmod(rem, side)
        return s, p, q

    atoms = [split(i) for i in range(2 * side * side)]
    tori = (pos, neg)
    asg.assign(lay.x[0], (core,), [s * l + p // 2 for s, p, q in atoms])
    asg.assign(lay.x[1], (core,), [s * l + ((p + 1) // 2) % l for s, p, q in atoms])
    asg.assign(lay.y[0], (core,), [q // 2 for s, p, q in atoms])
    asg.assign(lay.y[1], (core,), [((q + 1) // 2) % l for s, p, q in atoms])
    wvecs = [w_of_color(tori[s].color(p, q), k) for s, p, q in atoms]
    for i in range(k):
        asg.assign(lay.w[i], (core,), [wv[i] for wv in wvecs])
    asg.assign(lay.f, (coin,), [0, 1])
    for i in range(k):
        asg.derive(lay.v[i], [lay.w[i], lay.f], lambda w, f: (1 - w) * f)
        asg.derive(lay.vb[i], [lay.w[i], lay.f], lambda w, f: w * f)
    assign_from_index(asg, index)
    joint = asg.joint()
    missing = set(cs.all_vars()) - set(joint.variables)
    if missing:
        raise WitnessError(f"roster mismatch: unassigned variables {sorted(missing)[:5]}")
    return joint


# --- verification ---


@dataclass
class RowResult:
    tag: str
    rel: str
    value: float
    rhs: float
    residual: float
    violation: float
    passed: bool
    atoms: int


@dataclass
class VerificationReport:
    tolerance: float
    rows: list[RowResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list[RowResult]:
        return [r for r in self.rows if not r.passed]

    @property
    def max_violation(self) -> float:
        return max((r.violation for r in self.rows), default=0.0)

    @property
    def max_atoms(self) -> int:
        return max((r.atoms for r in self.rows), default=0)

    def to_obj(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "rows": [
                {
                    "tag": r.tag,
                    "rel": r.rel,
                    "lhs": r.value,
                    "rhs": r.rhs,
                    "residual": r.residual,
                    "pass": r.passed,
                    "atoms": r.atoms,
                }
                for r in self.rows
            ],
            "summary": {
                "rows": len(self.rows),
                "failures": len(self.failures),
                "max_violation": self.max_violation,
                "max_atoms": self.max_atoms,
                "pass": self.passed,
            },
        }


def verify(joint: FactoredJoint, system, tol: float = UNIT_TOL) -> VerificationReport:
    """Evaluate every row of a constraint or sparse affine system.

    Equality rows pass when |lhs - rhs| <= tol; inequality rows may violate
    their direction by at most tol.  Row order and results are deterministic;
    `atoms` records the largest single marginal enumeration the row needs.
    """
    if isinstance(system, SparseAffineSystem):
        rows = system.as_constraints()
    elif isinstance(system, ConstraintSystem):
        rows = system.rows
    else:
        rows = list(system)
    report = VerificationReport(tolerance=tol)
    cache: dict = {}
    for row in rows:
        value = eval_expression(joint, row.lhs, cache=cache)
        rhs = float(row.rhs)
        residual = value - rhs
        if row.rel == REL_EQ:
            violation = abs(residual)
        elif row.rel == REL_GE:
            violation = max(0.0, -residual)
        else:
            violation = max(0.0, residual)
        atoms = max((joint.atoms_for(vs) for vs in row.lhs.terms), default=0)
        report.rows.append(
            RowResult(row.tag, row.rel, value, rhs, residual, violation, violation <= tol, atoms)
        )
    return report


def report_dumps(report: VerificationReport) -> str:
    return json.dumps(report.to_obj(), separators=(",", ":")) + "\n"


# --- per-gadget unit witnesses ---


def unit_triple(m: int = 3):
    """Modular-sum block: two independent uniforms and their sum mod m."""
    from .gadgets import GadgetRef, instantiate_gadget

    cs = instantiate_gadget(GadgetRef("TRIPLE"), ["Y1", "Y2", "Y3"])
    asg = WitnessAssigner()
    a = asg.add_seed("seedA", m)
    b = asg.add_seed("seedB", m)
    asg.assign("Y1", (a,), np.arange(m))
    asg.assign("Y2", (b,), np.arange(m))
    asg.assign("Y3", (a, b), [(i + j) % m for i in range(m) for j in range(m)])
    return asg.joint(), cs


def unit_flip():
    """The four-atom coin/flip table with its three-point auxiliaries."""
    from .gadgets import SystemBuilder

    b = SystemBuilder(["F", "G1", "G2"])
    b.flip("F", "G1", "G2", "flip")
    asg = WitnessAssigner()
    coin = asg.add_seed("coinF", 2)
    bg = asg.add_seed("coinB", 2)
    cg = asg.add_seed("coinC", 2)
    asg.assign("F", (coin,), [0, 1])
    asg.derive("G1", ["F"], lambda f, x: (1 - f) * x, extra_seeds=[bg])
    asg.derive("G2", ["F"], lambda f, x: f * x, extra_seeds=[cg])
    assign_from_index(asg, b.index)
    return asg.joint(), b.system()


def unit_sw(k: int = 4):
    """Switch block with independent fair switches."""
    from .gadgets import SystemBuilder

    w = [f"W{i}" for i in range(1, k + 1)]
    v = [f"V{i}" for i in range(1, k + 1)]
    vb = [f"Vb{i}" for i in range(1, k + 1)]
    b = SystemBuilder(w + v + vb + ["F"])
    b.sw(w, v, vb, "F", "sw")
    asg = WitnessAssigner()
    coin = asg.add_seed("coinF", 2)
    asg.assign("F", (coin,), [0, 1])
    for i in range(k):
        ws = asg.add_seed(f"seedW{i + 1}", 2)
        asg.assign(w[i], (ws,), [0, 1])
        asg.derive(v[i], [w[i], "F"], lambda wv, f: (1 - wv) * f)
        asg.derive(vb[i], [w[i], "F"], lambda wv, f: wv * f)
    assign_from_index(asg, b.index)
    return asg.joint(), b.system()


def unit_sat(kind: str, k: int, groups: list[list[int]], s, sbar):
    """Group-counting gadget over explicit vertex groups.

    Each group is a list of signed colors; a uniform vertex seed ranges
    over all listed vertices, the group variable is the group id, and the
    switch vector of each vertex is its color's indicator pattern.
    """
    from .gadgets import SystemBuilder

    w = [f"W{i}" for i in range(1, k + 1)]
    v = [f"V{i}" for i in range(1, k + 1)]
    vb = [f"Vb{i}" for i in range(1, k + 1)]
    b = SystemBuilder(["E"] + w + v + vb + ["F"])
    b.sat(kind, ("E",), s, sbar, w, v, vb, "F", "sat")
    vertices = [(gi, color) for gi, grp in enumerate(groups) for color in grp]
    asg = WitnessAssigner()
    core = asg.add_seed("vertex", len(vertices))
    coin = asg.add_seed("coinF", 2)
    asg.assign("E", (core,), [gi for gi, _ in vertices])
    for i in range(k):
        asg.assign(w[i], (core,), [w_of_color(c, k)[i] for _, c in vertices])
    asg.assign("F", (coin,), [0, 1])
    for i in range(k):
        asg.derive(v[i], [w[i], "F"], lambda wv, f: (1 - wv) * f)
        asg.derive(vb[i], [w[i], "F"], lambda wv, f: wv * f)
    assign_from_index(asg, b.index)
    return asg.joint(), b.system()


# --- slack realization ---


def _solve_binary_entropy(target: float) -> Fraction:
    """p in (0, 1/2] with binary entropy close to target, as a rational."""
    lo, hi = 0.0, 0.5
    for _ in range(80):
        mid = (lo + hi) / 2
        if binary_entropy(mid) < target:
            lo = mid
        else:
            hi = mid
    return Fraction((lo + hi) / 2).limit_denominator(10**12)


def extend_witness_for_slack(joint: FactoredJoint, ge_system: SparseAffineSystem) -> FactoredJoint:
    """Add one fresh variable per row whose entropy matches the row's surplus.

    The surplus of row j is lhs - rhs evaluated on the witness (>= 0 if the
    witness verifies).  Exact uniform seeds realize the integer part and a
    rationalized two-point seed the fractional part, so the slackified
    equality system verifies to well below usual tolerances.
    """
    seeds = list(joint.seeds.values())
    variables = list(joint.variables.values())
    cache: dict = {}
    for j, row in enumerate(ge_system.rows, start=1):
        if row.rel != REL_GE:
            raise WitnessError("slack extension expects a >=-form system")
        surplus = eval_expression(joint, row.expr(), cache=cache) - float(row.rhs)
        surplus = max(0.0, surplus)
        name = f"_slack{j}"
        whole = int(surplus)
        fracpart = surplus - whole
        if whole > 24:
            raise WitnessError(f"row {row.tag}: surplus {surplus} too large to realize")
        refs = []
        if whole:
            seeds.append(uniform_seed(f"{name}.dyadic", 2**whole))
            refs.append(f"{name}.dyadic")
        if fracpart > 1e-12:
            p = _solve_binary_entropy(fracpart)
            seeds.append(Seed(f"{name}.bern", 2, (1 - p, p)))
            refs.append(f"{name}.bern")
        sizes = [2**whole] * bool(whole) + [2] * (fracpart > 1e-12)
        total = math.prod(sizes) if sizes else 1
        variables.append(Variable(name, tuple(refs), np.arange(total)))
    return FactoredJoint(seeds, variables)
