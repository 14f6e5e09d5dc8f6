"""Shannon outer-bound feasibility by exact rational phase-1 simplex.

A system is REFUTED when the polyhedron {elemental inequalities + system
rows} is empty; the refuter then returns dual multipliers that replay to an
exact contradiction (a nonnegative combination of the rows summing to the
zero vector with a positive right-hand side).  Anything else is UNKNOWN:
Shannon-type reasoning is incomplete, so feasibility of the linear program
never certifies satisfiability.

No floating point is used anywhere in this module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .expressions import REL_GE, InfoExpr, frac_str, varset_key
from .compiler import SparseAffineSystem

N_CAP = 10

REFUTED = "REFUTED"
UNKNOWN = "UNKNOWN"


class RefuterError(ValueError):
    pass


@dataclass
class LPOutcome:
    status: str
    certificate: list[tuple[str, Fraction]] | None = None

    def to_obj(self) -> dict:
        obj = {"status": self.status}
        if self.certificate is not None:
            obj["multipliers"] = [[tag, frac_str(m)] for tag, m in self.certificate]
        return obj


def elemental_inequalities(n: int, names: list[str] | None = None):
    """The elemental Shannon inequalities for n variables, as (tag, expr >= 0).

    Exactly the conditional entropies H(X_i | rest) and the conditional
    mutual informations I(X_i; X_j | X_K), deduplicated by construction and
    in canonical order.  There are n + C(n,2) * 2^(n-2) of them.
    """
    if not 1 <= n <= N_CAP:
        raise RefuterError(f"variable count {n} outside [1, {N_CAP}]")
    if names is None:
        names = [f"X{i}" for i in range(1, n + 1)]
    if len(names) != n:
        raise RefuterError("names length must match n")
    out = []
    allv = frozenset(names)
    if n == 1:
        out.append((f"elem:h({names[0]})", InfoExpr.entropy(names)))
        return out
    for i, nm in enumerate(names):
        rest = allv - {nm}
        expr = InfoExpr.entropy(allv) - InfoExpr.entropy(rest)
        out.append((f"elem:h({nm}|rest)", expr))
    for a, b in combinations(range(n), 2):
        na, nb = names[a], names[b]
        others = [nm for idx, nm in enumerate(names) if idx not in (a, b)]
        for mask in range(2 ** len(others)):
            kset = frozenset(nm for idx, nm in enumerate(others) if mask >> idx & 1)
            expr = (
                InfoExpr.entropy(kset | {na})
                + InfoExpr.entropy(kset | {nb})
                - InfoExpr.entropy(kset | {na, nb})
                - InfoExpr.entropy(kset)
            )
            ktxt = ",".join(sorted(kset))
            out.append((f"elem:i({na};{nb}|{{{ktxt}}})", expr))
    return out


def _phase1_feasible(rows):
    """Feasibility of {expr_i >= rhs_i} over free column variables.

    rows: list of (tag, {col: Fraction}, Fraction rhs).  Returns
    (feasible, certificate) where the certificate is the Farkas dual:
    y >= 0 with sum_i y_i row_i = 0 and sum_i y_i rhs_i > 0.

    Implementation: standard phase-1 simplex with Bland's rule on the
    tableau (free variables split into positive and negative parts, one
    surplus and one artificial column per row), all in Fractions.
    """
    cols = sorted({c for _, coeffs, _ in rows for c in coeffs}, key=varset_key)
    cidx = {c: i for i, c in enumerate(cols)}
    m = len(rows)
    nf = len(cols)
    # columns: x+ (nf), x- (nf), surplus (m), artificial (m)
    width = 2 * nf + 2 * m
    tab = []
    signs = []
    for r, (tag, coeffs, rhs) in enumerate(rows):
        row = [Fraction(0)] * (width + 1)
        sign = 1 if rhs >= 0 else -1
        signs.append(sign)
        for c, val in coeffs.items():
            row[cidx[c]] = sign * val
            row[nf + cidx[c]] = -sign * val
        row[2 * nf + r] = Fraction(-sign)  # surplus: expr - s = rhs
        row[2 * nf + m + r] = Fraction(1)  # artificial (identity after signing)
        row[width] = sign * rhs
        tab.append(row)
    basis = [2 * nf + m + r for r in range(m)]
    # objective: minimize sum of artificials; reduced costs z_j - c_j
    obj = [Fraction(0)] * (width + 1)
    for r in range(m):
        for j in range(width + 1):
            obj[j] += tab[r][j]
    for r in range(m):
        obj[2 * nf + m + r] -= Fraction(1)  # c_j = 1 on artificials

    def pivot(pr: int, pc: int):
        piv = tab[pr][pc]
        inv = Fraction(1) / piv
        tab[pr] = [x * inv for x in tab[pr]]
        for r in range(m):
            if r != pr and tab[r][pc] != 0:
                factor = tab[r][pc]
                tab[r] = [a - factor * b for a, b in zip(tab[r], tab[pr])]
        if obj[pc] != 0:
            factor = obj[pc]
            for j in range(width + 1):
                obj[j] -= factor * tab[pr][j]
        basis[pr] = pc

    while True:
        pc = next((j for j in range(width) if obj[j] > 0), None)  # Bland: smallest index
        if pc is None:
            break
        pr = None
        for r in range(m):
            if tab[r][pc] > 0:
                if pr is None:
                    pr = r
                else:
                    cur = tab[r][width] / tab[r][pc]
                    best = tab[pr][width] / tab[pr][pc]
                    if cur < best or (cur == best and basis[r] < basis[pr]):
                        pr = r
        if pr is None:
            raise RefuterError("phase-1 objective unbounded; malformed tableau")
        pivot(pr, pc)

    if obj[width] == 0:
        return True, None
    # infeasible: extract the dual y from the artificial columns,
    # y_r = sign_r * (reduced cost of artificial r + 1)
    cert = []
    for r in range(m):
        red = obj[2 * nf + m + r] + 1  # z_j (c_j = 1 was subtracted)
        y = signs[r] * red
        cert.append(y)
    return False, cert


def refute(sas: SparseAffineSystem, variables: list[str] | None = None) -> LPOutcome:
    """Decide Shannon-refutability of a >=-form sparse system.

    With `variables` given, rows mentioning any excluded variable are
    dropped before the check (a sound relaxation: REFUTED still implies the
    full system has no realization).
    """
    if variables is None:
        variables = list(sas.var_names)
    varset_all = frozenset(variables)
    if not varset_all <= set(sas.var_names):
        raise RefuterError("restriction names unknown to the system")
    n = len(variables)
    if not 1 <= n <= N_CAP:
        raise RefuterError(f"variable count {n} outside [1, {N_CAP}]")
    rows = []
    for tag, expr in elemental_inequalities(n, sorted(varset_all)):
        rows.append((tag, dict(expr.terms), Fraction(0)))
    for r in sas.rows:
        if r.rel != REL_GE:
            raise RefuterError("refute expects a >=-form system (run flatten first)")
        support = set().union(*(vs for vs, _ in r.entries)) if r.entries else set()
        if support <= varset_all:
            rows.append((r.tag, dict(r.entries), r.rhs))
    feasible, cert = _phase1_feasible(rows)
    if feasible:
        return LPOutcome(UNKNOWN)
    certificate = [
        (rows[i][0], y) for i, y in enumerate(cert) if y != 0
    ]
    replay_certificate(rows, certificate)
    return LPOutcome(REFUTED, certificate)


def replay_certificate(rows, certificate) -> None:
    """Exactly recompute the contradiction; raise if it does not replay.

    The nonnegative combination of the rows must cancel every entropy
    coefficient and leave a strictly positive right-hand side, i.e. prove
    0 >= rhs > 0.
    """
    by_tag = {}
    for tag, coeffs, rhs in rows:
        by_tag.setdefault(tag, []).append((coeffs, rhs))
    combo: dict = {}
    total_rhs = Fraction(0)
    for tag, mult in certificate:
        if mult < 0:
            raise RefuterError(f"negative multiplier on {tag}")
        if tag not in by_tag or not by_tag[tag]:
            raise RefuterError(f"certificate references unknown row {tag}")
        coeffs, rhs = by_tag[tag].pop(0)
        for c, val in coeffs.items():
            combo[c] = combo.get(c, Fraction(0)) + mult * val
        total_rhs += mult * rhs
    if any(v != 0 for v in combo.values()) or total_rhs <= 0:
        raise RefuterError("certificate does not replay to a contradiction")


def outcome_dumps(outcome: LPOutcome) -> str:
    return json.dumps(outcome.to_obj(), separators=(",", ":")) + "\n"
