"""Hueckel-style aromaticity resolution.

One contribution model serves both directions (perceiving Kekule input
and validating lowercase input): each candidate ring is scored as it
would look after aromatisation, so whatever this pass commits is exactly
what a re-read of the written form will accept.  Contributions: carbon 1
(0 with a surviving exocyclic double bond or a positive charge, 2 with a
negative charge), N/P with a hydrogen or third substituent 2 (pyrrole
type) else 1 (pyridine type), neutral O/S/Se/Te 2, positively charged
chalcogen 1, boron 0.  A ring is aromatic when every member can sit in
the pi system and the contributions sum to 4n+2; rings that fail alone
are retried as fused-system unions (naphthalene, azulene).

Ring candidates are the SSSR plus envelope rings of fused pairs, because
the SSSR of a fused polycycle is not unique and the choice must not
affect aromaticity.  Commits are greedy in deterministic order; a commit
that would invalidate an earlier one is rejected, which keeps writer and
reader in exact agreement even for cross-conjugated corner cases.
"""

from .elements import NORMAL_VALENCES
from .mol import AROMATIC, DOUBLE, SINGLE, TRIPLE, SmilesError, \
    _aromatic_default_h


def _ring_edge_set(ring):
    return frozenset(frozenset((ring[i], ring[(i + 1) % len(ring)]))
                     for i in range(len(ring)))


def _edges_to_cycle(edges):
    """Order an edge set into one simple cycle, or None."""
    adj = {}
    for edge in edges:
        a, b = tuple(edge)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(nbrs) != 2 for nbrs in adj.values()):
        return None
    start = min(adj)
    cycle = [start]
    prev, cur = None, start
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
        if len(cycle) > len(edges):
            return None
    return tuple(cycle) if len(cycle) == len(edges) else None


def _aromatic_ring_set(mol):
    rings = list(mol.rings)
    edge_sets = [_ring_edge_set(r) for r in rings]
    seen = {frozenset(r) for r in rings}
    n_base = len(rings)
    for i in range(n_base):
        for j in range(i + 1, n_base):
            if not edge_sets[i] & edge_sets[j]:
                continue
            combined = _edges_to_cycle(edge_sets[i] ^ edge_sets[j])
            if combined and frozenset(combined) not in seen:
                seen.add(frozenset(combined))
                rings.append(combined)
    return rings


def _preview_hydrogens(mol, written_aromatic, written_sums):
    """Hydrogen counts as they will be assigned after resolution."""
    preview = []
    for atom in mol.atoms:
        if atom.bracket:
            preview.append(atom.explicit_h)
        elif written_aromatic[atom.index]:
            preview.append(_aromatic_default_h(atom, mol))
        else:
            valences = NORMAL_VALENCES.get(atom.atomic_number)
            h = 0
            if valences:
                for v in valences:
                    if written_sums[atom.index] <= v:
                        h = v - written_sums[atom.index]
                        break
            preview.append(h)
    return preview


class _Resolver:
    def __init__(self, mol, written_aromatic, written_sums):
        self.mol = mol
        self.written_aromatic = written_aromatic
        self.preview_h = _preview_hydrogens(mol, written_aromatic,
                                            written_sums)
        self.committed_bonds = set()      # bond edges scheduled aromatic
        self.committed_atoms = set()
        self.history = []

    def _contribution(self, idx, ring_edges, extra_bonds):
        """Electrons the atom donates assuming ring_edges plus the
        already-committed bonds dissolve into the aromatic system."""
        mol = self.mol
        atom = mol.atoms[idx]
        z = atom.atomic_number
        dissolved = self.committed_bonds | ring_edges | extra_bonds
        remaining = []
        had_double = False
        for nbr, bond in mol.neighbors(idx):
            if bond.order == TRIPLE:
                return None
            if bond.order == DOUBLE:
                had_double = True
                if frozenset((idx, nbr)) not in dissolved:
                    remaining.append(bond)
        if len(remaining) > 1:
            return None

        aromatic_already = (self.written_aromatic[idx]
                            or idx in self.committed_atoms)
        if z == 6:
            if remaining:
                return 0
            if atom.charge > 0:
                return 0
            if atom.charge < 0:
                return 2
            return 1 if (had_double or aromatic_already) else None
        if z in (7, 15, 33):
            if remaining:
                return 1
            if atom.charge > 0:
                return 1
            if atom.charge < 0:
                return 2
            has_h = self.preview_h[idx] > 0
            return 2 if (has_h or mol.degree(idx) > 2) else 1
        if z in (8, 16, 34, 52):
            if remaining:
                return None
            if atom.charge > 0:
                return 1
            return 2
        if z == 5:
            return None if remaining else 0
        return None

    def passes(self, atoms, edges, extra_bonds=frozenset()):
        total = 0
        for idx in atoms:
            contrib = self._contribution(idx, edges, extra_bonds)
            if contrib is None:
                return False
            total += contrib
        return total % 4 == 2

    def try_commit(self, atoms, edges):
        """Commit a candidate if it passes and no earlier commitment is
        invalidated by its bonds dissolving."""
        if not self.passes(atoms, edges):
            return False
        for prev_atoms, prev_edges in self.history:
            if not self.passes(prev_atoms, prev_edges, extra_bonds=edges):
                return False
        self.committed_bonds |= edges
        self.committed_atoms |= set(atoms)
        return True

    def resolve(self, ring_set):
        candidates = []
        for ring in ring_set:
            candidates.append((tuple(ring), _ring_edge_set(ring)))
        # Fused-system unions rescue systems whose pi count only works as
        # a whole (azulene-type perimeters).
        groups = _fused_components([c[0] for c in candidates])
        for group in groups:
            if len(group) < 2:
                continue
            atoms = sorted({i for g in group for i in candidates[g][0]})
            edges = frozenset().union(*(candidates[g][1] for g in group))
            candidates.append((tuple(atoms), edges))
        # Largest systems first so a perimeter never loses to one of its
        # own sub-rings; deterministic tie-break by atom indices.
        candidates.sort(key=lambda c: (-len(c[0]), tuple(sorted(c[0]))))

        changed = True
        while changed:
            changed = False
            for atoms, edges in candidates:
                if edges <= self.committed_bonds:
                    continue
                if self.try_commit(atoms, edges):
                    self.history.append((atoms, edges))
                    changed = True
        return self.committed_atoms, self.committed_bonds


def _fused_components(rings):
    bond_sets = [_ring_edge_set(r) for r in rings]
    assigned = [None] * len(rings)
    groups = []
    for i in range(len(rings)):
        if assigned[i] is not None:
            continue
        group = [i]
        assigned[i] = len(groups)
        frontier = [i]
        while frontier:
            cur = frontier.pop()
            for j in range(len(rings)):
                if assigned[j] is None and bond_sets[cur] & bond_sets[j]:
                    assigned[j] = assigned[i]
                    group.append(j)
                    frontier.append(j)
        groups.append(group)
    return groups


def resolve_aromaticity(mol, text, written_aromatic, written_sums):
    """Aromatise Kekule rings and validate lowercase input in one pass."""
    has_rings = bool(mol.rings)
    parsed_aromatic = [i for i, flag in enumerate(written_aromatic) if flag]
    if not has_rings:
        if parsed_aromatic:
            raise SmilesError(
                f"aromatic atoms outside any ring in {text!r} "
                f"(atom indices {parsed_aromatic})")
        return

    resolver = _Resolver(mol, written_aromatic, written_sums)
    aromatic_atoms, aromatic_bonds = \
        resolver.resolve(_aromatic_ring_set(mol))

    missing = [i for i in parsed_aromatic if i not in aromatic_atoms]
    if missing:
        raise SmilesError(
            f"aromatic atoms outside any aromatic ring in {text!r} "
            f"(atom indices {missing})")

    for idx in aromatic_atoms:
        mol.atoms[idx].aromatic = True
    for bond in mol.bonds:
        key = frozenset((bond.a1, bond.a2))
        if key in aromatic_bonds:
            bond.order = AROMATIC
        elif bond.order == AROMATIC:
            if bond.explicit_aromatic:
                raise SmilesError(
                    f"':' bond outside an aromatic ring in {text!r}")
            bond.order = SINGLE
