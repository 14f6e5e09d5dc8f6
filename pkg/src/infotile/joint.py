"""Factored joint distributions and entropy evaluation.

A FactoredJoint is a list of independent finite seed components (each with an
exact rational probability vector) plus, per variable, a deterministic lookup
table over the product of the seed components it references.  Marginal
entropies are computed lazily: only the union of the seeds referenced by the
queried variables is enumerated.

Probabilities stay exact rationals; only logarithms are floating point.
Entropies are in bits.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .expressions import InfoExpr, frac, frac_str

DEFAULT_VECTOR_LIMIT = 16


class UnknownVariable(KeyError):
    pass


@dataclass(frozen=True)
class Seed:
    """An independent finite component with an exact probability vector."""

    name: str
    size: int
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.size < 1 or len(self.probs) != self.size:
            raise ValueError(f"seed {self.name}: bad size/probs length")
        probs = tuple(frac(p) for p in self.probs)
        if any(p < 0 for p in probs):
            raise ValueError(f"seed {self.name}: negative probability")
        if sum(probs) != 1:
            raise ValueError(f"seed {self.name}: probabilities must sum to 1 exactly")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_uniform", all(p == Fraction(1, self.size) for p in probs))

    @property
    def uniform(self) -> bool:
        return self._uniform


def uniform_seed(name: str, size: int) -> Seed:
    return Seed(name, size, tuple(Fraction(1, size) for _ in range(size)))


@dataclass(frozen=True)
class Variable:
    """A deterministic map from a tuple of seed values to a finite value.

    `table` is row-major over the product of the referenced seeds, with the
    last referenced seed varying fastest.
    """

    name: str
    seeds: tuple[str, ...]
    table: np.ndarray  # 1-d integer array

    def __post_init__(self):
        arr = np.asarray(self.table)
        if arr.ndim != 1:
            raise ValueError(f"variable {self.name}: table must be flat")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError(f"variable {self.name}: duplicate seed reference")
        object.__setattr__(self, "table", arr)
        object.__setattr__(self, "seeds", tuple(self.seeds))
        object.__setattr__(self, "vmax", int(arr.max()) if arr.size else 0)


class FactoredJoint:
    """A joint distribution in seed/table form."""

    def __init__(self, seeds: list[Seed], variables: list[Variable]):
        self.seeds = {s.name: s for s in seeds}
        if len(self.seeds) != len(seeds):
            raise ValueError("duplicate seed name")
        self.variables = {}
        for v in variables:
            if v.name in self.variables:
                raise ValueError(f"duplicate variable {v.name}")
            expected = 1
            for sn in v.seeds:
                if sn not in self.seeds:
                    raise ValueError(f"variable {v.name} references unknown seed {sn}")
                expected *= self.seeds[sn].size
            if len(v.table) != expected:
                raise ValueError(
                    f"variable {v.name}: table length {len(v.table)} != product {expected}"
                )
            self.variables[v.name] = v

    def var(self, name: str) -> Variable:
        try:
            return self.variables[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def var_names(self) -> list[str]:
        return list(self.variables)

    def referenced_seeds(self, names) -> list[str]:
        """Union of the seeds referenced by `names`, in canonical (sorted) order."""
        out = set()
        for n in names:
            out.update(self.var(n).seeds)
        return sorted(out)

    def atoms_for(self, names) -> int:
        total = 1
        for sn in self.referenced_seeds(names):
            total *= self.seeds[sn].size
        return total


# --- evaluation engine ---


def _broadcast_values(joint: FactoredJoint, name: str, order: list[str]) -> np.ndarray:
    """Values of `name` shaped for broadcasting over the seeds in `order`.

    The table is reshaped to the variable's own seed axes, transposed into
    `order` positions, and given singleton axes for unreferenced seeds, so
    arithmetic against other variables' arrays enumerates the product
    without materializing coordinate grids.
    """
    v = joint.var(name)
    if not v.seeds:
        return np.asarray(v.table, dtype=np.int64).reshape((1,) * max(len(order), 1))
    own_sizes = [joint.seeds[sn].size for sn in v.seeds]
    arr = np.asarray(v.table, dtype=np.int64).reshape(own_sizes)
    pos = {sn: i for i, sn in enumerate(order)}
    axes = sorted(range(len(v.seeds)), key=lambda i: pos[v.seeds[i]])
    arr = np.transpose(arr, axes)
    shape = [1] * len(order)
    for i in axes:
        shape[pos[v.seeds[i]]] = joint.seeds[v.seeds[i]].size
    return arr.reshape(shape)


def _joint_codes(joint: FactoredJoint, names: list[str]):
    """Return (codes, seed_order, total) for the variable tuple.

    `codes` assigns one integer per atom of the referenced-seed product,
    equal atoms getting equal codes iff the variable tuple agrees.  Codes
    are compressed stepwise so they never overflow.
    """
    order = joint.referenced_seeds(names)
    total = 1
    for sn in order:
        total *= joint.seeds[sn].size
    codes = None
    span = 1
    for n in sorted(names):
        vals = _broadcast_values(joint, n, order)
        vmax = joint.var(n).vmax
        if codes is None:
            codes, span = vals, vmax + 1
        else:
            if span * (vmax + 1) > 2**62:
                codes = np.unique(codes, return_inverse=True)[1].reshape(codes.shape)
                span = int(codes.max()) + 1
            codes = codes * (vmax + 1) + vals
            span *= vmax + 1
    shape = [joint.seeds[sn].size for sn in order] if order else [1]
    codes = np.broadcast_to(codes, shape).ravel()
    return codes, order, total


def subset_entropy(joint: FactoredJoint, names, counter: dict | None = None) -> float:
    """Joint entropy H of the named variables, in bits.

    Enumerates only the product of the union of referenced seed components.
    `counter`, when given, records the number of atoms enumerated under key
    'atoms' (max over calls).
    """
    names = sorted(set(names))
    if not names:
        return 0.0
    codes, order, total = _joint_codes(joint, names)
    if counter is not None:
        counter["atoms"] = max(counter.get("atoms", 0), total)
    if all(joint.seeds[sn].uniform for sn in order):
        _, counts = np.unique(codes, return_counts=True)
        counts = counts.astype(np.float64)
        return math.log2(total) - float(np.dot(counts, np.log2(counts))) / total
    weights = np.ones((1,) * len(order), dtype=np.float64)
    for i, sn in enumerate(order):
        pvec = np.array([float(p) for p in joint.seeds[sn].probs])
        shape = [1] * len(order)
        shape[i] = joint.seeds[sn].size
        weights = weights * pvec.reshape(shape)
    weights = weights.ravel()
    _, inv = np.unique(codes, return_inverse=True)
    pm = np.bincount(inv, weights=weights)
    pm = pm[pm > 0]
    return float(-np.dot(pm, np.log2(pm)))


def eval_expression(joint: FactoredJoint, expr: InfoExpr,
                    cache: dict | None = None, counter: dict | None = None) -> float:
    """Evaluate a linear entropy expression against a joint."""
    out = 0.0
    for vs, coef in expr.sorted_terms():
        if cache is not None and vs in cache:
            h = cache[vs]
        else:
            h = subset_entropy(joint, vs, counter=counter)
            if cache is not None:
                cache[vs] = h
        out += float(coef) * h
    return out


@dataclass
class EntropyVector:
    """All nonempty-subset entropies of an ordered variable list."""

    names: list[str]
    entries: dict[frozenset, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.names)

    def __getitem__(self, names) -> float:
        if isinstance(names, str):
            names = [names]
        return self.entries[frozenset(names)]


def entropic_vector(joint: FactoredJoint, names: list[str],
                    limit: int = DEFAULT_VECTOR_LIMIT) -> EntropyVector:
    """Materialize all 2^n - 1 subset entropies (n capped by `limit`)."""
    names = list(names)
    if len(names) > limit:
        raise ValueError(f"{len(names)} variables exceeds materialization limit {limit}")
    vec = EntropyVector(names)
    for mask in range(1, 2 ** len(names)):
        sub = frozenset(n for i, n in enumerate(names) if mask >> i & 1)
        vec.entries[sub] = subset_entropy(joint, sub)
    return vec


# --- exact (rational) marginals, for uniformity and balance checks ---


def exact_marginal(joint: FactoredJoint, names) -> dict[tuple, Fraction]:
    """Exact marginal pmf of the named variable tuple (sorted name order)."""
    names = sorted(set(names))
    order = joint.referenced_seeds(names)
    out: dict[tuple, Fraction] = {}
    seed_vals = [range(joint.seeds[sn].size) for sn in order]
    pos = {sn: i for i, sn in enumerate(order)}
    specs = []
    for n in names:
        v = joint.var(n)
        strides = []
        stride = 1
        for sn in reversed(v.seeds):
            strides.append((pos[sn], stride))
            stride *= joint.seeds[sn].size
        specs.append((v, strides))
    for atom in product(*seed_vals):
        p = Fraction(1)
        for sn, val in zip(order, atom):
            p *= joint.seeds[sn].probs[val]
        if p == 0:
            continue
        key = tuple(
            int(v.table[sum(atom[i] * s for i, s in strides)]) for v, strides in specs
        )
        out[key] = out.get(key, Fraction(0)) + p
    return out


def exact_uniform_over(joint: FactoredJoint, name: str, size: int) -> bool:
    """True iff `name` is exactly uniform over the values 0..size-1.

    Fast path: when every referenced seed is uniform the check reduces to
    integer atom counting.
    """
    v = joint.var(name)
    order = joint.referenced_seeds([name])
    total = 1
    for sn in order:
        total *= joint.seeds[sn].size
    if total % size != 0:
        return False
    if all(joint.seeds[sn].uniform for sn in order):
        vals = np.asarray(v.table, dtype=np.int64)
        if vals.min() < 0 or vals.max() >= size:
            return False
        counts = np.bincount(vals, minlength=size)
        return bool((counts == total // size).all())
    pmf = exact_marginal(joint, [name])
    want = Fraction(1, size)
    return set(pmf) == {(i,) for i in range(size)} and all(p == want for p in pmf.values())


def binary_entropy(t) -> float:
    """Entropy in bits of a Bernoulli(t) variable."""
    t = float(t)
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return -t * math.log2(t) - (1 - t) * math.log2(1 - t)


# --- serialization ---


def joint_to_obj(joint: FactoredJoint) -> dict:
    return {
        "seeds": [
            {"name": s.name, "size": s.size, "probs": [frac_str(p) for p in s.probs]}
            for s in joint.seeds.values()
        ],
        "vars": [
            {"name": v.name, "seeds": list(v.seeds), "table": [int(x) for x in v.table]}
            for v in joint.variables.values()
        ],
    }


def joint_from_obj(obj: dict) -> FactoredJoint:
    seeds = [
        Seed(s["name"], int(s["size"]), tuple(Fraction(p) for p in s["probs"]))
        for s in obj["seeds"]
    ]
    variables = [
        Variable(v["name"], tuple(v["seeds"]), np.asarray(v["table"], dtype=np.int64))
        for v in obj["vars"]
    ]
    return FactoredJoint(seeds, variables)


def joint_dumps(joint: FactoredJoint) -> str:
    return json.dumps(joint_to_obj(joint), separators=(",", ":")) + "\n"


def joint_loads(text: str) -> FactoredJoint:
    return joint_from_obj(json.loads(text))
