"""Finite unbranched covers, supercells, induced momenta, and hopping quivers.

A degree-N cover of the genus-g group is a tuple of 2g permutations of the
sheets {1..N} (one per generator, acting on the right: words walk sheets left
to right) whose relator permutation is the identity.  Two pushforward routes
turn base models + cover data into spectra:

  * `supercell(model, cover)`: one tight-binding model on the cover group,
    with N-fold larger cells, built by Reidemeister-Schreier rewriting;
  * `induce(chi, cover)`: the induced (monomial) nonabelian momentum on the
    base group, fed to `bloch_nonabelian`.

Both produce the same Hamiltonian matrix in the same state ordering
(cell index major, sheet index minor), so their spectra agree; see
`pushforward_check`.

The rewriting pipeline: a BFS spanning forest fixes a Schreier transversal;
each of the 2gN directed edges (sheet s, generator gamma) carries the Schreier
element t_s gamma t_{s.gamma}^{-1} (trivial exactly on tree edges); the N
rewritten relators are abelianized over the non-tree edges and quotiented out
with an exact integer Smith normal form.  The surviving free quotient has rank
2 * genus(cover), and each edge class must be zero or +- a basis direction --
a cover whose classes cannot be straightened this way (they exist!) gets an
UnsupportedCoverError rather than a silently wrong supercell.

A quiver presents one model's Hamiltonian as nodes (atoms = groups of cell
states) and block arrows (label: which generator the hop crosses, or none for
on-site blocks).  `torus_action` scales arrows by character values, and
`reassemble` rebuilds H(chi) with the exact accumulation order of
`bloch_abelian`, so the round trip is bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedCoverError
from .momenta import AbelianMomentum, NonabelianMomentum
from .surface_group import Word, free_reduce, make_surface_group
from .tight_binding import TightBindingModel, bloch_abelian, bloch_nonabelian

__all__ = [
    "UnbranchedCover",
    "cover_genus",
    "supercell",
    "induce",
    "PushforwardReport",
    "pushforward_check",
    "cover_to_json",
    "cover_from_json",
    "read_cover",
    "Quiver",
    "QuiverArrow",
    "quiver_from_model",
    "torus_action",
    "reassemble",
]

COVER_FORMAT_KEY = "hyperband_cover"
COVER_FORMAT_VERSION = 1


@dataclass(frozen=True)
class UnbranchedCover:
    """sheets N and one sheet permutation per generator (one-indexed images).

    perms[i][s-1] is the sheet reached from sheet s along generator i+1.  The
    relator permutation must be the identity (that is what makes the data a
    genuine cover of the surface group, not just of the free group).
    """

    sheets: int
    perms: tuple

    def __post_init__(self):
        n = int(self.sheets)
        if n < 1:
            raise ValueError("a cover needs at least one sheet")
        perms = tuple(tuple(int(v) for v in p) for p in self.perms)
        if len(perms) == 0 or len(perms) % 2 != 0:
            raise ValueError("need 2g permutations for some g >= 1")
        for idx, p in enumerate(perms):
            if sorted(p) != list(range(1, n + 1)):
                raise ValueError(
                    f"entry {idx + 1} is not a permutation of 1..{n}: {p}"
                )
        object.__setattr__(self, "sheets", n)
        object.__setattr__(self, "perms", perms)
        group = make_surface_group(len(perms) // 2)
        image = self.word_permutation(group.relator())
        if image != tuple(range(n)):
            raise ValueError(
                "the relator permutation is not the identity; "
                "this is a free-group cover but not a surface-group cover"
            )

    @property
    def genus(self) -> int:
        """Genus of the base group."""
        return len(self.perms) // 2

    def forward(self, sheet0: int, gen: int) -> int:
        """0-indexed sheet reached along generator `gen` (1-indexed)."""
        return self.perms[gen - 1][sheet0] - 1

    def backward(self, sheet0: int, gen: int) -> int:
        return self.perms[gen - 1].index(sheet0 + 1)

    def word_permutation(self, word: Word) -> tuple:
        """0-indexed image tuple of the right action of `word` on sheets."""
        state = list(range(self.sheets))
        for g, e in word.letters:
            if g > len(self.perms):
                raise ValueError(f"word uses generator {g}, cover has {len(self.perms)}")
            if e == 1:
                state = [self.forward(s, g) for s in state]
            else:
                state = [self.backward(s, g) for s in state]
        return tuple(state)

    def components(self) -> tuple:
        """Connected components as sorted tuples of 0-indexed sheets."""
        seen = [False] * self.sheets
        comps = []
        for start in range(self.sheets):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                s = stack.pop()
                comp.append(s)
                for g in range(1, len(self.perms) + 1):
                    for t in (self.forward(s, g), self.backward(s, g)):
                        if not seen[t]:
                            seen[t] = True
                            stack.append(t)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def transitive(self) -> bool:
        return len(self.components()) == 1


def cover_genus(cover: UnbranchedCover, base_genus: int = None) -> int:
    """Genus of the covering surface group: sum over components of N_j(g-1)+1."""
    g = cover.genus if base_genus is None else int(base_genus)
    if base_genus is not None and g != cover.genus:
        raise ValueError(f"cover was built over genus {cover.genus}, not {g}")
    return sum(len(c) * (g - 1) + 1 for c in cover.components())


# ---------------------------------------------------------------------------
# Reidemeister-Schreier data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _SchreierData:
    cover: UnbranchedCover
    transversal: tuple  # Word per sheet
    tree_edges: frozenset  # (sheet0, gen) pairs
    edge_order: tuple  # non-tree (sheet0, gen) in scan order
    edge_index: dict  # (sheet0, gen) -> index into edge_order
    classes: dict  # (sheet0, gen) -> tuple[int] in the free quotient (all edges)
    directions: tuple  # deduplicated sign-normalized nonzero classes, basis order
    edge_assignment: dict  # (sheet0, gen) -> (direction index, sign) or (None, 0)
    genus_cover: int


def _spanning_forest(cover: UnbranchedCover):
    """BFS forest (least sheet of each component first, generators in order).

    Returns (transversal words, tree edge set).  Tree edges are stored in
    forward orientation (s, gamma) meaning s -> s.gamma.
    """
    n = cover.sheets
    n_gens = 2 * cover.genus
    transversal = [None] * n
    tree = set()
    for root in range(n):
        if transversal[root] is not None:
            continue
        transversal[root] = Word(())
        queue = [root]
        while queue:
            s = queue.pop(0)
            for g in range(1, n_gens + 1):
                t = cover.forward(s, g)
                if transversal[t] is None:
                    transversal[t] = transversal[s] * Word(((g, 1),))
                    tree.add((s, g))
                    queue.append(t)
                t = cover.backward(s, g)
                if transversal[t] is None:
                    transversal[t] = transversal[s] * Word(((g, -1),))
                    tree.add((t, g))
                    queue.append(t)
    return tuple(transversal), frozenset(tree)


def _smith_right_transform(rows: list, width: int):
    """Exact integer Smith-style diagonalization tracking the column transform.

    Returns (diagonal entries, V) with (original) @ V related to the diagonal
    by unimodular row operations; V is unimodular.  Only the diagonal values
    and V are needed: rank = #nonzero diagonal entries, torsion-freeness =
    all nonzero entries are +-1, and the class of basis vector e_j in the
    quotient by the row lattice is row j of V restricted to the free columns.
    """
    R = [[int(v) for v in row] for row in rows]
    n = len(R)
    V = [[1 if i == j else 0 for j in range(width)] for i in range(width)]

    def col_swap(a, b):
        for i in range(n):
            R[i][a], R[i][b] = R[i][b], R[i][a]
        for i in range(width):
            V[i][a], V[i][b] = V[i][b], V[i][a]

    def col_add(dst, src, q):
        for i in range(n):
            R[i][dst] += q * R[i][src]
        for i in range(width):
            V[i][dst] += q * V[i][src]

    t = 0
    limit = min(n, width)
    while t < limit:
        pivot = None
        for i in range(t, n):
            for j in range(t, width):
                if R[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i0, j0 = pivot
        if i0 != t:
            R[i0], R[t] = R[t], R[i0]
        if j0 != t:
            col_swap(j0, t)
        while True:
            # shrink the pivot by column ops along its row ...
            for j in range(t + 1, width):
                if R[t][j] != 0:
                    q = R[t][j] // R[t][t]
                    col_add(j, t, -q)
                    if R[t][j] != 0:
                        col_swap(t, j)
            # ... and row ops along its column (V untouched)
            for i in range(t + 1, n):
                if R[i][t] != 0:
                    q = R[i][t] // R[t][t]
                    R[i] = [x - q * y for x, y in zip(R[i], R[t])]
                    if R[i][t] != 0:
                        R[i], R[t] = R[t], R[i]
            if all(R[t][j] == 0 for j in range(t + 1, width)) and all(
                R[i][t] == 0 for i in range(t + 1, n)
            ):
                break
        t += 1
    diagonal = [R[i][i] for i in range(min(n, width))]
    return diagonal, V


def _int_det(matrix: list) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    m = [[int(v) for v in row] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _schreier_data(cover: UnbranchedCover) -> _SchreierData:
    g = cover.genus
    n = cover.sheets
    n_gens = 2 * g
    transversal, tree = _spanning_forest(cover)

    edge_order = []
    edge_index = {}
    for s in range(n):
        for gen in range(1, n_gens + 1):
            if (s, gen) not in tree:
                edge_index[(s, gen)] = len(edge_order)
                edge_order.append((s, gen))
    k = len(edge_order)

    # consistency: the Schreier word of a tree edge must reduce to nothing
    for s, gen in tree:
        t = cover.forward(s, gen)
        h = free_reduce(transversal[s] * Word(((gen, 1),)) * transversal[t].inverse())
        if len(h) != 0:
            raise AssertionError("spanning forest produced a nontrivial tree relation")

    # abelianized rewritten relators: one row per sheet over the non-tree edges
    group = make_surface_group(g)
    relator = group.relator()
    rows = []
    for start in range(n):
        row = [0] * k
        s = start
        for gen, exp in relator.letters:
            if exp == 1:
                edge = (s, gen)
                nxt = cover.forward(s, gen)
                sign = 1
            else:
                prev = cover.backward(s, gen)
                edge = (prev, gen)
                nxt = prev
                sign = -1
            if edge not in tree:
                row[edge_index[edge]] += sign
            s = nxt
        if s != start:
            raise AssertionError("relator walk did not close up")
        rows.append(row)

    if k == 0:
        classes = {edge: () for edge in tree}
        return _SchreierData(
            cover=cover,
            transversal=transversal,
            tree_edges=tree,
            edge_order=(),
            edge_index={},
            classes=classes,
            directions=(),
            edge_assignment={edge: (None, 0) for edge in tree},
            genus_cover=cover_genus(cover),
        )

    diagonal, V = _smith_right_transform(rows, k)
    rank = sum(1 for d in diagonal if d != 0)
    if any(d != 0 and abs(d) != 1 for d in diagonal):
        raise UnsupportedCoverError(
            "the rewritten relators leave torsion in the hop-class lattice; "
            "this cover cannot carry a single-generator-hop supercell"
        )
    free = k - rank
    g_cover = cover_genus(cover)
    if free != 2 * g_cover:
        raise UnsupportedCoverError(
            f"free hop-class rank {free} does not match 2 * genus(cover) = {2 * g_cover}"
        )

    classes = {}
    for j, edge in enumerate(edge_order):
        classes[edge] = tuple(V[j][rank:])
    for edge in tree:
        classes[edge] = tuple([0] * free)

    def normalized(c):
        for v in c:
            if v > 0:
                return tuple(c), 1
            if v < 0:
                return tuple(-x for x in c), -1
        return None, 0

    directions = []
    for edge in edge_order:
        base, sign = normalized(classes[edge])
        if sign != 0 and base not in directions:
            directions.append(base)
    if len(directions) != free:
        raise UnsupportedCoverError(
            f"found {len(directions)} distinct hop directions but the free rank "
            f"is {free}; the classes cannot be straightened to single generators"
        )
    if directions and abs(_int_det([list(d) for d in directions])) != 1:
        raise UnsupportedCoverError(
            "hop directions do not form a unimodular basis of the class lattice"
        )

    edge_assignment = {}
    for edge, cls in classes.items():
        base, sign = normalized(cls)
        if sign == 0:
            edge_assignment[edge] = (None, 0)
        else:
            edge_assignment[edge] = (directions.index(base), sign)

    return _SchreierData(
        cover=cover,
        transversal=transversal,
        tree_edges=tree,
        edge_order=tuple(edge_order),
        edge_index=edge_index,
        classes=classes,
        directions=tuple(directions),
        edge_assignment=edge_assignment,
        genus_cover=g_cover,
    )


def supercell(model: TightBindingModel, cover: UnbranchedCover) -> TightBindingModel:
    """The cover-group tight-binding model with N-fold cells.

    States are ordered (cell state) major, (sheet) minor, matching the
    Kronecker convention of `bloch_nonabelian`.  Edges with trivial hop class
    land in the on-site matrix; an edge of class +-(direction i) contributes
    its hop block to supercell generator i+1 (forward or dagger side).
    """
    if cover.genus != model.genus:
        raise ValueError(f"genus mismatch: model {model.genus}, cover {cover.genus}")
    data = _schreier_data(cover)
    n = cover.sheets
    d = model.dim
    big = d * n
    onsite = np.kron(model.onsite, np.eye(n, dtype=complex))
    n_new = 2 * data.genus_cover
    new_hops = [np.zeros((big, big), dtype=complex) for _ in range(n_new)]

    def basis_block(a: int, b: int) -> np.ndarray:
        E = np.zeros((n, n), dtype=complex)
        E[a, b] = 1.0
        return E

    for s in range(n):
        for gen in range(1, 2 * model.genus + 1):
            t = cover.forward(s, gen)
            direction, sign = data.edge_assignment[(s, gen)]
            J = model.hops[gen - 1]
            if direction is None:
                onsite = onsite + np.kron(J, basis_block(s, t))
                onsite = onsite + np.kron(J.conj().T, basis_block(t, s))
            elif sign > 0:
                new_hops[direction] += np.kron(J, basis_block(s, t))
            else:
                new_hops[direction] += np.kron(J.conj().T, basis_block(t, s))
    return TightBindingModel(make_surface_group(data.genus_cover), onsite, new_hops)


def induce(chi: AbelianMomentum, cover: UnbranchedCover) -> NonabelianMomentum:
    """Monomial momentum on the base group induced from a cover-group character.

    rho(gamma)[s, s.gamma] is the character evaluated on the edge's Schreier
    element, read through the same direction assignment the supercell uses
    (class +-d_i means the i-th cover generator, so the two pushforward
    routes sample identical character values edge by edge); inverses are
    exact monomial transposes built from the character's stored reciprocals.
    """
    if not isinstance(chi, AbelianMomentum):
        raise TypeError("induce expects an AbelianMomentum on the cover group")
    data = _schreier_data(cover)
    if chi.genus != data.genus_cover:
        raise ValueError(
            f"character has genus {chi.genus}, cover group has genus {data.genus_cover}"
        )
    n = cover.sheets
    mats, invs = [], []
    for gen in range(1, 2 * cover.genus + 1):
        rho = np.zeros((n, n), dtype=complex)
        rho_inv = np.zeros((n, n), dtype=complex)
        for s in range(n):
            t = cover.forward(s, gen)
            direction, sign = data.edge_assignment[(s, gen)]
            if direction is None:
                rho[s, t] = 1.0
                rho_inv[t, s] = 1.0
            elif sign > 0:
                rho[s, t] = chi.chi[direction]
                rho_inv[t, s] = chi.chi_inv[direction]
            else:
                rho[s, t] = chi.chi_inv[direction]
                rho_inv[t, s] = chi.chi[direction]
        mats.append(rho)
        invs.append(rho_inv)
    return NonabelianMomentum(tuple(mats), tuple(invs))


@dataclass(frozen=True)
class PushforwardReport:
    """Outcome of comparing the two pushforward routes at one character."""

    n_states: int
    connected: bool
    genus_cover: int
    matrix_distance: float
    spectral_distance: float
    spectral_radius: float
    tolerance: float
    passed: bool


def pushforward_check(
    model: TightBindingModel,
    cover: UnbranchedCover,
    chi: AbelianMomentum,
    tol: float = 1e-9,
) -> PushforwardReport:
    """Compare supercell and induced-momentum spectra at one character."""
    from .spectra import eigenvalues  # deferred: spectra imports nothing from here

    induced = induce(chi, cover)
    h_induced = bloch_nonabelian(model, induced)
    big_model = supercell(model, cover)
    h_supercell = bloch_abelian(big_model, chi)
    spec_a = eigenvalues(h_induced)
    spec_b = eigenvalues(h_supercell)
    distance = float(np.max(np.abs(spec_a - spec_b)))
    radius = float(max(np.max(np.abs(spec_a)), np.max(np.abs(spec_b))))
    matrix_distance = float(np.max(np.abs(h_induced.matrix - h_supercell.matrix)))
    passed = distance <= tol * max(radius, 1e-12)
    return PushforwardReport(
        n_states=h_induced.matrix.shape[0],
        connected=cover.transitive,
        genus_cover=cover_genus(cover),
        matrix_distance=matrix_distance,
        spectral_distance=distance,
        spectral_radius=radius,
        tolerance=tol,
        passed=passed,
    )


def cover_to_json(cover: UnbranchedCover) -> dict:
    return {
        COVER_FORMAT_KEY: COVER_FORMAT_VERSION,
        "sheets": cover.sheets,
        "perms": [list(p) for p in cover.perms],
    }


def cover_from_json(data: dict) -> UnbranchedCover:
    if data.get(COVER_FORMAT_KEY) != COVER_FORMAT_VERSION:
        raise ValueError(
            f"not a cover document (missing or unsupported {COVER_FORMAT_KEY!r} marker)"
        )
    return UnbranchedCover(int(data["sheets"]), tuple(tuple(p) for p in data["perms"]))


def read_cover(path) -> UnbranchedCover:
    with open(path, "r", encoding="utf-8") as fh:
        return cover_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# quivers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuiverArrow:
    """One block of the Hamiltonian: rows(target) x columns(source).

    label is the generator the hop crosses (1..2g) or None for on-site blocks;
    reverse marks the dagger side of a crossing.
    """

    source: int
    target: int
    block: np.ndarray
    label: object = None
    reverse: bool = False

    def __post_init__(self):
        b = np.array(self.block, dtype=complex)
        b.setflags(write=False)
        object.__setattr__(self, "block", b)


@dataclass(frozen=True)
class Quiver:
    """Nodes (atoms = tuples of state indices) and block arrows."""

    genus: int
    dim: int
    nodes: tuple  # tuple of tuples of 0-indexed states
    arrows: tuple = field(default_factory=tuple)

    def internal_arrows(self) -> tuple:
        return tuple(a for a in self.arrows if a.label is None)

    def crossing_arrows(self, label: int = None) -> tuple:
        return tuple(
            a
            for a in self.arrows
            if a.label is not None and (label is None or a.label == label)
        )


def _check_partition(dim: int, nodes) -> tuple:
    nodes = tuple(tuple(int(s) for s in atom) for atom in nodes)
    flat = sorted(s for atom in nodes for s in atom)
    if flat != list(range(dim)):
        raise ValueError(f"atoms must partition the {dim} cell states, got {nodes}")
    if any(len(atom) == 0 for atom in nodes):
        raise ValueError("empty atoms are not allowed")
    return nodes


def quiver_from_model(model: TightBindingModel, nodes=None) -> Quiver:
    """Decompose the model into per-atom blocks.

    `nodes` partitions the cell states into atoms (default: one atom per
    state).  Every nonzero block of the on-site matrix becomes an internal
    arrow; every nonzero block of hop J_gamma becomes a label-gamma arrow, and
    every nonzero block of J_gamma^dagger its reverse-side arrow.
    """
    if nodes is None:
        nodes = tuple((s,) for s in range(model.dim))
    nodes = _check_partition(model.dim, nodes)
    arrows = []

    def blocks_of(matrix, label, reverse):
        found = []
        for b, rows in enumerate(nodes):
            for a, cols in enumerate(nodes):
                block = matrix[np.ix_(rows, cols)]
                if np.any(block != 0):
                    found.append(
                        QuiverArrow(
                            source=a, target=b, block=block, label=label, reverse=reverse
                        )
                    )
        return found

    arrows.extend(blocks_of(model.onsite, None, False))
    for gen in range(1, 2 * model.genus + 1):
        arrows.extend(blocks_of(model.hops[gen - 1], gen, False))
        arrows.extend(blocks_of(model.hops_dagger[gen - 1], gen, True))
    return Quiver(genus=model.genus, dim=model.dim, nodes=nodes, arrows=tuple(arrows))


def torus_action(quiver: Quiver, chi: AbelianMomentum) -> Quiver:
    """Scale label-gamma arrows by chi_gamma (forward) / chi_gamma^{-1} (reverse)."""
    if chi.genus != quiver.genus:
        raise ValueError(f"genus mismatch: quiver {quiver.genus}, momentum {chi.genus}")
    arrows = []
    for a in quiver.arrows:
        if a.label is None:
            arrows.append(a)
        else:
            factor = chi.chi_inv[a.label - 1] if a.reverse else chi.chi[a.label - 1]
            arrows.append(
                QuiverArrow(
                    source=a.source,
                    target=a.target,
                    block=factor * a.block,
                    label=a.label,
                    reverse=a.reverse,
                )
            )
    return Quiver(genus=quiver.genus, dim=quiver.dim, nodes=quiver.nodes, arrows=tuple(arrows))


def reassemble(quiver: Quiver, chi: AbelianMomentum = None) -> np.ndarray:
    """Rebuild the Hamiltonian from the arrows.

    With `chi` given, crossing arrows are weighted chi_gamma / chi_gamma^{-1};
    without it they enter with weight one (useful after torus_action, which
    bakes the weights into the blocks).  The accumulation order mirrors
    `bloch_abelian` -- on-site first, then one combined forward+dagger pass
    per generator -- so the result matches it bit-for-bit.
    """
    d = quiver.dim
    H = np.zeros((d, d), dtype=complex)
    for a in quiver.internal_arrows():
        rows, cols = quiver.nodes[a.target], quiver.nodes[a.source]
        H[np.ix_(rows, cols)] += a.block
    for gen in range(1, 2 * quiver.genus + 1):
        pair = np.zeros((d, d), dtype=complex)
        for a in quiver.crossing_arrows(gen):
            if a.reverse:
                continue
            rows, cols = quiver.nodes[a.target], quiver.nodes[a.source]
            weight = 1.0 if chi is None else chi.chi[gen - 1]
            block = a.block if chi is None else weight * a.block
            pair[np.ix_(rows, cols)] += block
        for a in quiver.crossing_arrows(gen):
            if not a.reverse:
                continue
            rows, cols = quiver.nodes[a.target], quiver.nodes[a.source]
            block = a.block if chi is None else chi.chi_inv[gen - 1] * a.block
            pair[np.ix_(rows, cols)] += block
        H += pair
    return H
