"""Generic finite-loop engine over Cayley tables.

A loop of order m is an m x m Latin square with a two-sided identity.
Indices are 0-based inside the package; the text file format and all
user-facing labels are 1-based.  Cayley tables are numpy int16 arrays.

Permutations act on the right: ``p * q`` means "apply p, then q", matching
the convention y R_x = y * x for right translations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class MalformedTableError(ValueError):
    """Raised for tables that are not square or have out-of-range entries."""


class InvalidLoopError(ValueError):
    """Raised when constructing a checked LoopTable from a non-loop table."""


class ClosureCapError(RuntimeError):
    """Raised when a permutation closure exceeds its element cap."""


class Perm:
    """A permutation of [0, m), stored as the array of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        arr = np.array(images, dtype=np.int16, copy=True)
        if arr.ndim != 1:
            raise ValueError("permutation images must be a 1-d sequence")
        self.images = arr
        self.images.setflags(write=False)

    @classmethod
    def identity(cls, m: int) -> "Perm":
        return cls(np.arange(m, dtype=np.int16))

    @classmethod
    def from_cycles(cls, m: int, cycles, one_based: bool = False) -> "Perm":
        images = np.arange(m, dtype=np.int16)
        shift = 1 if one_based else 0
        for cycle in cycles:
            cycle = [c - shift for c in cycle]
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return cls(images)

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def __mul__(self, other: "Perm") -> "Perm":
        # right action: apply self first, then other
        return Perm(other.images[self.images])

    def inverse(self) -> "Perm":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images), dtype=np.int16)
        return Perm(inv)

    def is_identity(self) -> bool:
        return bool((self.images == np.arange(len(self.images))).all())

    def fixed_points(self) -> list:
        return [int(i) for i in np.nonzero(self.images == np.arange(len(self.images)))[0]]

    def cycles(self, include_fixed: bool = False) -> list:
        seen = np.zeros(len(self.images), dtype=bool)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            j = int(self.images[start])
            while j != start:
                cycle.append(j)
                seen[j] = True
                j = int(self.images[j])
            if len(cycle) > 1 or include_fixed:
                out.append(tuple(cycle))
        return out

    def cycle_type(self) -> tuple:
        seen = np.zeros(len(self.images), dtype=bool)
        lengths = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            n, j = 1, int(self.images[start])
            seen[start] = True
            while j != start:
                seen[j] = True
                j = int(self.images[j])
                n += 1
            lengths.append(n)
        return tuple(sorted(lengths))

    def cycle_string(self, one_based: bool = True) -> str:
        shift = 1 if one_based else 0
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join(
            "(" + ",".join(str(c + shift) for c in cyc) + ")" for cyc in cycles
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def __repr__(self) -> str:
        return f"Perm{self.cycle_string(one_based=False)}"


class LoopTable:
    """A finite loop given by its Cayley table.

    ``table[x, y]`` is the 0-based index of x * y.  With ``check=True`` the
    constructor enforces the Latin-square and identity axioms; pass
    ``check=False`` to hold arbitrary (possibly broken) tables, e.g. for
    mutation testing against verify_loop.
    """

    def __init__(self, table, identity=None, labels=None, check: bool = True):
        arr = np.array(table, dtype=np.int16, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MalformedTableError(f"table shape {arr.shape} is not square")
        m = arr.shape[0]
        if m == 0:
            raise MalformedTableError("empty table")
        if arr.min() < 0 or arr.max() >= m:
            raise MalformedTableError("table entries out of range")
        self.table = arr
        self.table.setflags(write=False)
        self.order = m
        if identity is None:
            identity = _find_identity(arr)
            if identity is None and check:
                raise InvalidLoopError("table has no two-sided identity")
        self.identity = identity if identity is not None else -1
        self.labels = list(labels) if labels is not None else None
        self._ldiv = None
        self._rdiv = None
        if check:
            verdict = verify_loop(self)
            if not verdict.ok:
                raise InvalidLoopError(f"not a loop: {verdict.reason}")

    # -- divisions -----------------------------------------------------------

    @property
    def ldiv(self) -> np.ndarray:
        """ldiv[x, y] = the unique z with x * z = y."""
        if self._ldiv is None:
            m = self.order
            ld = np.empty((m, m), dtype=np.int16)
            cols = np.arange(m, dtype=np.int16)
            for x in range(m):
                ld[x, self.table[x]] = cols
            self._ldiv = ld
            self._ldiv.setflags(write=False)
        return self._ldiv

    @property
    def rdiv(self) -> np.ndarray:
        """rdiv[y, x] = the unique z with z * x = y."""
        if self._rdiv is None:
            m = self.order
            rd = np.empty((m, m), dtype=np.int16)
            rows = np.arange(m, dtype=np.int16)
            for x in range(m):
                rd[self.table[:, x], x] = rows
            self._rdiv = rd
            self._rdiv.setflags(write=False)
        return self._rdiv

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def left_divide(self, x: int, y: int) -> int:
        """x \\ y."""
        return int(self.ldiv[x, y])

    def right_divide(self, y: int, x: int) -> int:
        """y / x."""
        return int(self.rdiv[y, x])

    def right_translation(self, x: int) -> Perm:
        """R_x: y -> y * x (a column of the table)."""
        return Perm(self.table[:, x])

    def left_translation(self, x: int) -> Perm:
        """L_x: y -> x * y (a row of the table)."""
        return Perm(self.table[x, :])

    def right_section(self) -> list:
        return [self.right_translation(x) for x in range(self.order)]

    def label_of(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i + 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LoopTable)
            and self.identity == other.identity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.identity, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"LoopTable(order={self.order}, identity={self.identity + 1})"


def _find_identity(table) -> int | None:
    m = table.shape[0]
    idx = np.arange(m)
    for e in range(m):
        if (table[e] == idx).all() and (table[:, e] == idx).all():
            return e
    return None


@dataclass(frozen=True)
class LoopVerdict:
    ok: bool
    latin_ok: bool
    identity_ok: bool
    fixed_point_free_ok: bool
    reason: str = ""
    witness: tuple | None = None


def verify_loop(table_like, identity=None) -> LoopVerdict:
    """Decide whether a table is a loop, cross-checking two criteria.

    The primary test is Latin square + two-sided identity.  The cross-check
    uses right translations: distinct translations must never agree at a
    point (R_x R_y^{-1} has no fixed point for x != y), which for finite
    tables with bijective columns is equivalent to the Latin property.  A
    disagreement between the two would be an internal error and raises.
    """
    if isinstance(table_like, LoopTable):
        arr = table_like.table
        identity = table_like.identity if identity is None else identity
    else:
        arr = np.asarray(table_like, dtype=np.int16)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise MalformedTableError(f"table shape {arr.shape} is not square")
        if arr.min() < 0 or arr.max() >= arr.shape[0]:
            raise MalformedTableError("table entries out of range")
    if identity is None or identity < 0:
        identity = _find_identity(arr)

    identity_ok = identity is not None
    e = identity if identity_ok else 0

    bad_r = _kernels.bad_row(arr)
    bad_c = _kernels.bad_col(arr)
    latin_ok = bad_r < 0 and bad_c < 0

    # translation criterion: columns bijective + no two columns agree anywhere
    cols_ok = bad_c < 0
    agree_full = (
        _kernels.translation_agreement(arr, e, skip_identity_pairs=False)
        if cols_ok
        else (-2, -2, -2)
    )
    fpf_full_ok = cols_ok and agree_full[0] < 0

    ok = latin_ok and identity_ok
    if ok != (fpf_full_ok and identity_ok):
        raise AssertionError(
            "internal error: Latin-square and translation criteria disagree"
        )

    reason, witness = "", None
    if not identity_ok:
        reason = "no two-sided identity"
    elif bad_r >= 0:
        reason, witness = f"row {bad_r + 1} is not a permutation", ("row", bad_r)
    elif bad_c >= 0:
        reason, witness = f"column {bad_c + 1} is not a permutation", ("col", bad_c)

    # the classical criterion skips pairs involving the identity; on valid
    # loops it must hold, and it is reported as part of the verdict
    if ok:
        agree = _kernels.translation_agreement(arr, e, skip_identity_pairs=True)
        fpf_ok = agree[0] < 0
        if not fpf_ok:
            raise AssertionError(
                "internal error: valid loop with agreeing right translations"
            )
    else:
        fpf_ok = fpf_full_ok
    return LoopVerdict(ok, latin_ok, identity_ok, fpf_ok, reason, witness)


# -- permutation closure ------------------------------------------------------


class PermGroup:
    """Closure of a set of permutations, with membership and stabilizers."""

    def __init__(self, elements: np.ndarray, generator_count: int):
        self.elements = elements  # (order, m) array, BFS order from identity
        self.order = elements.shape[0]
        self.degree = elements.shape[1]
        self.generator_count = generator_count
        self._index = {row.tobytes(): i for i, row in enumerate(elements)}

    def contains(self, perm) -> bool:
        arr = perm.images if isinstance(perm, Perm) else np.asarray(perm, dtype=np.int16)
        return arr.astype(np.int16).tobytes() in self._index

    def stabilizer_size(self, point: int) -> int:
        return int((self.elements[:, point] == point).sum())

    def stabilizer_elements(self, point: int) -> np.ndarray:
        return self.elements[self.elements[:, point] == point]

    def __iter__(self):
        for row in self.elements:
            yield Perm(row)

    def __len__(self) -> int:
        return self.order


def _bfs_close(gen_arrays, m, cap):
    identity = np.arange(m, dtype=np.int16)
    index = {identity.tobytes(): 0}
    elements = [identity]
    frontier = [identity]
    while frontier:
        stack = np.stack(frontier)
        frontier = []
        for g in gen_arrays:
            products = g[stack]  # right action: apply element, then g
            for row in products:
                key = row.tobytes()
                if key not in index:
                    if len(elements) >= cap:
                        raise ClosureCapError(
                            f"closure exceeded cap of {cap} elements"
                        )
                    index[key] = len(elements)
                    elements.append(row)
                    frontier.append(row)
    return np.stack(elements)


def perm_closure(generators, cap: int = 1 << 20) -> PermGroup:
    """Group generated by the permutations, by deterministic breadth-first
    closure with a hard element cap.

    Generators are introduced incrementally in the given order: a generator
    already inside the group built so far adds nothing and is skipped, which
    keeps the breadth-first sweeps small.  The result is exact - every input
    generator is verified to be in the final group.
    """
    gens = [
        p.images if isinstance(p, Perm) else np.asarray(p, dtype=np.int16)
        for p in generators
    ]
    if not gens:
        raise ValueError("need at least one generator")
    m = len(gens[0])
    if any(len(g) != m for g in gens):
        raise ValueError("generators act on different domains")

    chosen = []
    group = None
    known = {np.arange(m, dtype=np.int16).tobytes()}
    for g in gens:
        if g.astype(np.int16).tobytes() in known:
            continue
        chosen.append(g.astype(np.int16))
        elements = _bfs_close(chosen, m, cap)
        known = {row.tobytes() for row in elements}
        group = elements
    if group is None:  # all generators were the identity
        group = np.arange(m, dtype=np.int16).reshape(1, m)
    result = PermGroup(group, generator_count=len(gens))
    for g in gens:
        if not result.contains(g):
            raise AssertionError("internal error: generator missing from closure")
    return result


# -- subloops, normality, quotients -------------------------------------------


def subloop_generated(loop: LoopTable, seeds) -> tuple:
    """Smallest multiplication-closed subset containing the identity and seeds.

    For finite loops closure under the product implies closure under both
    divisions and membership of the identity.
    """
    table = loop.table
    members = set(int(s) for s in seeds)
    members.add(loop.identity)
    frontier = sorted(members)
    while frontier:
        current = np.fromiter(sorted(members), dtype=np.int16)
        prods = np.unique(table[np.ix_(current, current)])
        new = [int(v) for v in prods if int(v) not in members]
        members.update(new)
        frontier = new
    return tuple(sorted(members))


def is_subloop(loop: LoopTable, members) -> bool:
    idx = np.fromiter(sorted(set(int(v) for v in members)), dtype=np.int16)
    if loop.identity not in set(int(v) for v in idx):
        return False
    prods = np.unique(loop.table[np.ix_(idx, idx)])
    return set(int(v) for v in prods) <= set(int(v) for v in idx)


def is_normal(loop: LoopTable, members) -> bool:
    """Test the four coset-compatibility conditions:
    xN = Nx, x(yN) = (xy)N, (Nx)y = N(xy), x(Ny) = (xN)y.
    """
    idx = np.fromiter(sorted(set(int(v) for v in members)), dtype=np.int16)
    if not is_subloop(loop, idx):
        return False
    return (
        _kernels.normality_violation(loop.table, loop.ldiv, loop.rdiv, idx) == 0
    )


def _conjugation_subloop_closure(loop: LoopTable, seeds) -> tuple:
    """Close a seed set under products and translation conjugation y*s/y."""
    table, rdiv = loop.table, loop.rdiv
    members = set(subloop_generated(loop, seeds))
    while True:
        idx = np.fromiter(sorted(members), dtype=np.int16)
        conj = rdiv[table[:, idx], np.arange(loop.order, dtype=np.int16)[:, None]]
        new = set(int(v) for v in np.unique(conj)) - members
        if not new:
            return tuple(sorted(members))
        members = set(subloop_generated(loop, members | new))


def enumerate_normal_subloops(loop: LoopTable, candidate_cap: int = 4096) -> list:
    """All normal subloops, smallest first.

    Every normal subloop is a join of single-element closures that are
    stable under products and under conjugation by translations (for x in a
    normal N, y*x/y stays in N).  The lattice generated by those atoms under
    pairwise joins covers all normal subloops; each candidate is then
    confirmed against the four defining conditions, so the enumeration is
    exact regardless of how coarse the candidate lattice is.
    """
    atoms = set()
    for x in range(loop.order):
        atoms.add(_conjugation_subloop_closure(loop, (x,)))
    lattice = set(atoms)
    frontier = set(atoms)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in sorted(lattice):
                if set(a) <= set(b) or set(b) <= set(a):
                    continue
                join = _conjugation_subloop_closure(loop, set(a) | set(b))
                if join not in lattice and join not in fresh:
                    fresh.add(join)
                    if len(lattice) + len(fresh) > candidate_cap:
                        raise RuntimeError(
                            "normal-subloop candidate lattice exceeded cap"
                        )
        lattice |= fresh
        frontier = fresh
    found = [s for s in lattice if is_normal(loop, s)]
    return sorted(found, key=lambda s: (len(s), s))


def quotient_loop(loop: LoopTable, members) -> tuple:
    """Quotient by a normal subloop.

    Returns (quotient, cosets) where cosets[i] is the sorted tuple of
    elements in the i-th coset; coset representatives are the smallest
    member, cosets are ordered by representative, and the identity coset
    comes first by construction.  Well-definedness of the coset product is
    asserted during construction.
    """
    if not is_normal(loop, members):
        raise ValueError("subset is not a normal subloop")
    table = loop.table
    idx = np.fromiter(sorted(set(int(v) for v in members)), dtype=np.int16)
    m = loop.order
    coset_id = np.full(m, -1, dtype=np.int64)
    cosets = []
    for x in range(m):
        if coset_id[x] >= 0:
            continue
        coset = np.unique(table[x, idx])
        if (coset_id[coset] >= 0).any():
            raise AssertionError("internal error: cosets do not partition")
        coset_id[coset] = len(cosets)
        cosets.append(tuple(int(v) for v in coset))
    k = len(cosets)
    qtable = np.full((k, k), -1, dtype=np.int16)
    for i, ci in enumerate(cosets):
        for j, cj in enumerate(cosets):
            prods = coset_id[table[np.ix_(np.array(ci), np.array(cj))]]
            first = prods.flat[0]
            if (prods != first).any():
                raise AssertionError(
                    "internal error: coset product not well defined"
                )
            qtable[i, j] = first
    labels = [
        "{" + ",".join(str(v + 1) for v in coset) + "}" for coset in cosets
    ]
    quotient = LoopTable(qtable, identity=0, labels=labels, check=True)
    return quotient, cosets


# -- text format ---------------------------------------------------------------


def dump_table(loop: LoopTable) -> str:
    """Serialize in the interchange format: a header line
    ``order m identity e`` followed by m rows of 1-based indices.
    """
    lines = [f"order {loop.order} identity {loop.identity + 1}"]
    for row in loop.table:
        lines.append(" ".join(str(int(v) + 1) for v in row))
    return "\n".join(lines) + "\n"


def parse_table(text: str, check: bool = True) -> LoopTable:
    """Parse the interchange format; inverse of dump_table."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise MalformedTableError("empty table file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "order" or head[2] != "identity":
        raise MalformedTableError(f"bad header line: {lines[0]!r}")
    try:
        m, e = int(head[1]), int(head[3])
    except ValueError as exc:
        raise MalformedTableError(f"bad header line: {lines[0]!r}") from exc
    if len(lines) != m + 1:
        raise MalformedTableError(f"expected {m} rows, found {len(lines) - 1}")
    if not 1 <= e <= m:
        raise MalformedTableError(f"identity {e} out of range 1..{m}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != m:
            raise MalformedTableError(f"row {len(rows) + 1} has {len(parts)} entries")
        try:
            row = [int(v) for v in parts]
        except ValueError as exc:
            raise MalformedTableError(f"non-integer entry in row {len(rows) + 1}") from exc
        if any(not 1 <= v <= m for v in row):
            raise MalformedTableError(f"entry out of range 1..{m} in row {len(rows) + 1}")
        rows.append([v - 1 for v in row])
    arr = np.asarray(rows, dtype=np.int16)
    if check:
        return LoopTable(arr, identity=e - 1, check=True)
    return LoopTable(arr, identity=e - 1, check=False)
