"""Isomorphism classification of the constructed loops.

Two loops built over the same field are isomorphic exactly when their
defining quadratics lie in one orbit of the coefficient-wise Frobenius
action (r, s) -> (r^p, s^p).  The module computes those orbits, evaluates
the closed-form class count, and cross-validates both against a
brute-force Cayley-table isomorphism oracle on small orders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construct import RccLoop, build_loop
from .fields import FiniteField, Quadratic, enumerate_irreducible_quadratics
from .loops import LoopTable, enumerate_normal_subloops, quotient_loop
from .analysis import compute_subsets


def predicted_count(p: int, n: int) -> int:
    """Closed-form number of classes: floor((q^2-q)/2n) + ((q^2-q)/2 mod n)."""
    q = p**n
    half = (q * q - q) // 2
    return half // n + (half % n)


def frobenius_orbits(field: FiniteField) -> list:
    """Partition of the irreducible quadratics into Frobenius orbits.

    Orbits are returned sorted by their canonical representative, the
    lexicographically least (r, s) code pair; members inside an orbit are
    sorted the same way.  Orbit sizes always divide n.
    """
    quads = enumerate_irreducible_quadratics(field)
    seen = set()
    orbits = []
    for f in quads:
        if f.codes in seen:
            continue
        orbit = set()
        g = f
        for _ in range(field.n):
            orbit.add(g.codes)
            g = g.frobenius(1)
        seen |= orbit
        orbits.append(sorted(orbit))
    orbits.sort(key=lambda o: o[0])
    by_codes = {f.codes: f for f in quads}
    return [[by_codes[c] for c in orbit] for orbit in orbits]


@dataclass
class IsoClassReport:
    p: int
    n: int
    q: int
    quadratic_count: int
    orbit_count: int
    formula_count: int
    counts_match: bool
    orbits: list  # dicts: representative, members, size, r_zero, simple

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "quadratic_count": self.quadratic_count,
            "orbit_count": self.orbit_count,
            "formula_count": self.formula_count,
            "counts_match": self.counts_match,
            "orbits": self.orbits,
        }


def frobenius_classify(field: FiniteField, verify_structure: bool | None = None) -> IsoClassReport:
    """Group the quadratics into orbits and tally the classes.

    ``verify_structure`` controls whether simplicity per class is
    established by building the representative loop and enumerating its
    normal subloops (default for q <= 9) or predicted from r != 0.
    """
    if verify_structure is None:
        verify_structure = field.q <= 9
    orbits = frobenius_orbits(field)
    entries = []
    for orbit in orbits:
        rep = orbit[0]
        r_zero = rep.r.code == 0
        if verify_structure:
            loop = build_loop(field, rep)
            norms = enumerate_normal_subloops(loop.table)
            simple = all(len(s) in (1, loop.order) for s in norms)
            simple_source = "enumerated"
        else:
            simple = not r_zero
            simple_source = "predicted_from_r"
        entries.append(
            {
                "representative": {"r": rep.r.code, "s": rep.s.code},
                "members": [{"r": rc, "s": sc} for rc, sc in (f.codes for f in orbit)],
                "size": len(orbit),
                "r_zero": r_zero,
                "simple": simple,
                "simple_source": simple_source,
            }
        )
    formula = predicted_count(field.p, field.n)
    quads = (field.q * field.q - field.q) // 2
    return IsoClassReport(
        p=field.p,
        n=field.n,
        q=field.q,
        quadratic_count=quads,
        orbit_count=len(orbits),
        formula_count=formula,
        counts_match=len(orbits) == formula,
        orbits=entries,
    )


# -- explicit isomorphisms from field automorphisms ----------------------------


def build_iso(alpha_index: int, source: RccLoop, target: RccLoop) -> np.ndarray:
    """The coordinate map [a, b] -> [a^(p^i), b^(p^i)] as an index bijection.

    Requires target's quadratic to be the alpha-image of source's; the
    returned mapping is verified to be a homomorphism by a full table
    sweep before being returned.
    """
    if source.field != target.field:
        raise ValueError("loops over different fields")
    F = source.field
    if source.f.frobenius(alpha_index) != target.f:
        raise ValueError(
            f"quadratic {target.f!r} is not the Frobenius image "
            f"(i={alpha_index}) of {source.f!r}"
        )
    mapping = np.empty(source.order, dtype=np.int16)
    for i in range(source.order):
        a, b = source.pair_of(i)
        mapping[i] = target.element_index(
            (F.frobenius_c(a, alpha_index), F.frobenius_c(b, alpha_index))
        )
    ta, tb = source.table.table, target.table.table
    if not (mapping[ta] == tb[np.ix_(mapping, mapping)]).all():
        raise AssertionError("internal error: coordinate map is not a homomorphism")
    return mapping


# -- brute-force oracle ---------------------------------------------------------


@dataclass(frozen=True)
class IsoResult:
    status: str  # "found" | "absent" | "budget_exceeded"
    mapping: np.ndarray | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def _base_signatures(lt: LoopTable) -> list:
    """Canonical isomorphism-invariant signature per element: identity
    flag, right- and left-translation cycle types, commutant membership,
    and the length of the right-translation cycle through the identity
    (the right power order)."""
    t = lt.table
    comm = (t == t.T).all(axis=1)
    sigs = []
    for x in range(lt.order):
        cyc_e = 1
        j = int(t[lt.identity, x])
        while j != lt.identity:
            j = int(t[j, x])
            cyc_e += 1
        sigs.append(
            (
                x == lt.identity,
                lt.right_translation(x).cycle_type(),
                lt.left_translation(x).cycle_type(),
                bool(comm[x]),
                cyc_e,
            )
        )
    return sigs


def _joint_colors(a: LoopTable, b: LoopTable) -> tuple:
    """Refine invariant colors for two loops over a shared color alphabet.

    Starting from the canonical base signatures, each round folds in the
    sorted multiset of (color[y], color[x*y], color[y*x]); signatures from
    both loops share one id space, so equal colors mean equal invariants
    across the two loops.  An isomorphism always maps elements to
    same-colored elements, making color-based pruning sound.
    """
    sigs = {"a": _base_signatures(a), "b": _base_signatures(b)}
    ids = {s: i for i, s in enumerate(sorted(set(sigs["a"]) | set(sigs["b"])))}
    colors = {
        k: np.array([ids[s] for s in sigs[k]], dtype=np.int64) for k in ("a", "b")
    }
    tables = {"a": a.table, "b": b.table}
    while True:
        new_sigs = {}
        for k in ("a", "b"):
            t, col = tables[k], colors[k]
            out = []
            for x in range(t.shape[0]):
                trip = np.stack([col, col[t[x]], col[t[:, x]]], axis=1)
                trip = trip[np.lexsort(trip.T[::-1])]
                out.append((int(col[x]), trip.tobytes()))
            new_sigs[k] = out
        ids = {
            s: i for i, s in enumerate(sorted(set(new_sigs["a"]) | set(new_sigs["b"])))
        }
        new_colors = {
            k: np.array([ids[s] for s in new_sigs[k]], dtype=np.int64)
            for k in ("a", "b")
        }
        before = len(set(colors["a"].tolist()) | set(colors["b"].tolist()))
        after = len(ids)
        colors = new_colors
        if after == before:
            return colors["a"], colors["b"]


def _generating_sequence(lt: LoopTable) -> list:
    from .loops import subloop_generated

    gens = []
    current = {lt.identity}
    while len(current) < lt.order:
        nxt = min(i for i in range(lt.order) if i not in current)
        gens.append(nxt)
        current = set(subloop_generated(lt, gens))
    return gens


def iso_oracle(
    a: LoopTable, b: LoopTable, node_budget: int = 2_000_000
) -> IsoResult:
    """Search for an isomorphism between two loops by backtracking.

    The map is pinned on a generating sequence of the first loop; images
    are restricted to elements of equal invariant color, and each partial
    choice is closed under products, which forces the rest of the map or
    exposes a contradiction.  Absence is definitive (the search is
    exhaustive); running out of node budget is reported distinctly.
    """
    if a.order != b.order:
        return IsoResult("absent")
    m = a.order
    ca, cb = _joint_colors(a, b)
    hist_a = sorted(np.bincount(ca, minlength=1).tolist())
    hist_b = sorted(np.bincount(cb, minlength=1).tolist())
    if sorted(set(ca.tolist())) != sorted(set(cb.tolist())) or hist_a != hist_b:
        return IsoResult("absent")

    ta, tb = a.table, b.table
    gens = _generating_sequence(a)
    budget = [node_budget]

    def propagate(img, used, start):
        # close the partial map under products; None on contradiction
        queue = [start]
        assigned = [x for x in range(m) if img[x] >= 0]
        while queue:
            x = queue.pop()
            for y in list(assigned):
                for (u, v) in ((x, y), (y, x)):
                    z = int(ta[u, v])
                    w = int(tb[img[u], img[v]])
                    if img[z] < 0:
                        if used[w]:
                            return None
                        img[z] = w
                        used[w] = True
                        assigned.append(z)
                        queue.append(z)
                    elif img[z] != w:
                        return None
        return img

    def extend(img, used, gi):
        if gi == len(gens):
            arr = np.array(img, dtype=np.int16)
            if (arr[ta] == tb[np.ix_(arr, arr)]).all():
                return arr
            return None
        g = gens[gi]
        if img[g] >= 0:  # already forced by propagation
            return extend(img, used, gi + 1)
        for cand in range(m):
            if used[cand] or ca[g] != cb[cand]:
                continue
            budget[0] -= 1
            if budget[0] <= 0:
                return "budget"
            img2 = img.copy()
            used2 = used.copy()
            img2[g] = cand
            used2[cand] = True
            closed = propagate(img2, used2, g)
            if closed is None:
                continue
            result = extend(closed, used2, gi + 1)
            if isinstance(result, np.ndarray) or result == "budget":
                return result
        return None

    img = [-1] * m
    used = [False] * m
    img[a.identity] = b.identity
    used[b.identity] = True
    outcome = extend(img, used, 0)
    if isinstance(outcome, np.ndarray):
        return IsoResult("found", outcome)
    if outcome == "budget":
        return IsoResult("budget_exceeded")
    return IsoResult("absent")


# -- classification crosscheck ---------------------------------------------------


@dataclass
class CrosscheckReport:
    q: int
    orbit_count: int
    formula_count: int
    counts_match: bool
    oracle_used: bool
    oracle_partition_matches: bool | None
    simple_loops: int
    r_zero_orbits: int
    simple_quotients: int | None
    mismatches: list

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "q": self.q,
            "orbit_count": self.orbit_count,
            "formula_count": self.formula_count,
            "counts_match": self.counts_match,
            "oracle_used": self.oracle_used,
            "oracle_partition_matches": self.oracle_partition_matches,
            "simple_loops": self.simple_loops,
            "r_zero_orbits": self.r_zero_orbits,
            "simple_quotients": self.simple_quotients,
            "mismatches": self.mismatches,
        }


def classification_crosscheck(
    field: FiniteField,
    use_oracle: bool | None = None,
    verify_structure: bool | None = None,
) -> CrosscheckReport:
    """Compare the orbit partition with the closed-form count and, for
    small fields, with the partition induced by the brute-force oracle
    over all constructed loops; tally simple classes and simple quotients.
    """
    q = field.q
    if use_oracle is None:
        use_oracle = q <= 5
    report = frobenius_classify(field, verify_structure=verify_structure)
    mismatches = []
    if not report.counts_match:
        mismatches.append(
            f"orbit count {report.orbit_count} != formula {report.formula_count}"
        )

    oracle_match = None
    if use_oracle:
        quads = enumerate_irreducible_quadratics(field)
        loops = {f.codes: build_loop(field, f) for f in quads}
        orbit_of = {}
        for k, orbit in enumerate(frobenius_orbits(field)):
            for f in orbit:
                orbit_of[f.codes] = k
        oracle_match = True
        keys = [f.codes for f in quads]
        for i, ka in enumerate(keys):
            for kb in keys[i + 1 :]:
                res = iso_oracle(loops[ka].table, loops[kb].table)
                if res.status == "budget_exceeded":
                    mismatches.append(f"oracle budget exceeded on {ka} vs {kb}")
                    oracle_match = False
                    continue
                same_orbit = orbit_of[ka] == orbit_of[kb]
                if res.found != same_orbit:
                    oracle_match = False
                    mismatches.append(
                        f"oracle {'found' if res.found else 'refuted'} isomorphism "
                        f"for {ka} vs {kb}, orbits say {'same' if same_orbit else 'different'}"
                    )

    simple_loops = sum(1 for o in report.orbits if o["simple"])
    r_zero = [o for o in report.orbits if o["r_zero"]]
    simple_quotients = None
    if r_zero:
        quotient_order = (q * q - 1) // 2
        if quotient_order <= 200:
            simple_quotients = 0
            for o in r_zero:
                rep = o["representative"]
                loop = build_loop(
                    field,
                    Quadratic(field.element(rep["r"]), field.element(rep["s"])),
                )
                neg_one = field.neg_c(1)
                center = tuple(
                    sorted({0, loop.element_index((0, neg_one))})
                )
                qt, _ = quotient_loop(loop.table, center)
                qnorms = enumerate_normal_subloops(qt)
                if all(len(s) in (1, qt.order) for s in qnorms):
                    simple_quotients += 1
        else:
            simple_quotients = len(r_zero)  # predicted; not enumerated
    return CrosscheckReport(
        q=q,
        orbit_count=report.orbit_count,
        formula_count=report.formula_count,
        counts_match=report.counts_match,
        oracle_used=use_oracle,
        oracle_partition_matches=oracle_match,
        simple_loops=simple_loops,
        r_zero_orbits=len(r_zero),
        simple_quotients=simple_quotients,
        mismatches=mismatches,
    )


# -- summary table ----------------------------------------------------------------


def table2_rows(fields: list) -> list:
    """Count table rows: for each field one row for the full loops of
    order q^2 - 1 and, when quadratics with r = 0 exist, one row for the
    central quotients of order (q^2 - 1)/2.

    Columns: q, loop order, number of quadratics (raw), number of classes
    (Frobenius orbits), number of simple objects.  Quotient rows count
    r = 0 quadratics and their orbits, so both the raw and orbit counts
    that are conflated elsewhere are visible.
    """
    rows = []
    for field in fields:
        q = field.q
        report = frobenius_classify(field)
        rows.append(
            {
                "q": q,
                "kind": "loops",
                "order": q * q - 1,
                "quadratics": report.quadratic_count,
                "classes": report.orbit_count,
                "simple": sum(1 for o in report.orbits if o["simple"]),
            }
        )
        r_zero_quads = [
            f for f in enumerate_irreducible_quadratics(field) if f.r.code == 0
        ]
        if r_zero_quads:
            r_zero_orbits = [o for o in report.orbits if o["r_zero"]]
            cross = classification_crosscheck(field, use_oracle=False)
            rows.append(
                {
                    "q": q,
                    "kind": "quotients",
                    "order": (q * q - 1) // 2,
                    "quadratics": len(r_zero_quads),
                    "classes": len(r_zero_orbits),
                    "simple": cross.simple_quotients,
                }
            )
    return rows
