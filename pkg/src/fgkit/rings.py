"""Ring perception: ring-bond detection via bridge finding and a smallest
set of smallest rings built from a minimum cycle basis (Horton-style)."""

from collections import deque


def find_bridges(n_atoms, adjacency):
    """Return the set of bridge edges as frozensets {i, j}.

    ``adjacency`` maps atom index -> list of neighbour indices.
    Iterative Tarjan lowlink computation; an edge is a bridge iff it lies
    on no cycle.
    """
    visited = [False] * n_atoms
    disc = [0] * n_atoms
    low = [0] * n_atoms
    bridges = set()
    timer = 0
    for root in range(n_atoms):
        if visited[root]:
            continue
        stack = [(root, -1, iter(adjacency[root]))]
        visited[root] = True
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            node, parent, it = stack[-1]
            advanced = False
            for nbr in it:
                if nbr == parent:
                    # Skip one edge back to the parent; parallel edges are
                    # impossible in a simple graph.
                    parent = -2
                    stack[-1] = (node, parent, it)
                    continue
                if visited[nbr]:
                    low[node] = min(low[node], disc[nbr])
                else:
                    visited[nbr] = True
                    disc[nbr] = low[nbr] = timer
                    timer += 1
                    stack.append((nbr, node, iter(adjacency[nbr])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    pnode = stack[-1][0]
                    low[pnode] = min(low[pnode], low[node])
                    if low[node] > disc[pnode]:
                        bridges.add(frozenset((pnode, node)))
    return bridges


class _XorBasis:
    """Linear basis over GF(2) keyed by highest set bit."""

    def __init__(self):
        self.vectors = {}

    def add(self, mask):
        while mask:
            high = mask.bit_length() - 1
            pivot = self.vectors.get(high)
            if pivot is None:
                self.vectors[high] = mask
                return True
            mask ^= pivot
        return False


def _bfs_tree(root, ring_adj):
    dist = {root: 0}
    parent = {root: None}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for nbr in ring_adj[node]:
            if nbr not in dist:
                dist[nbr] = dist[node] + 1
                parent[nbr] = node
                queue.append(nbr)
    return dist, parent

def _path_to_root(v, parent):
    path = []
    while v is not None:
        path.append(v)
        v = parent[v]
    return path


def _candidate_cycles(ring_atoms, ring_adj, ring_edges):
    """Horton candidates: BFS tree through each vertex plus one edge."""
    for root in ring_atoms:
        dist, parent = _bfs_tree(root, ring_adj)
        for edge in ring_edges:
            x, y = tuple(edge)
            if x not in dist or y not in dist:
                continue
            if parent.get(x) == y or parent.get(y) == x:
                continue
            px = _path_to_root(x, parent)
            py = _path_to_root(y, parent)
            if set(px[:-1]) & set(py[:-1]):
                continue
            yield list(reversed(px)) + py[:-1]


def _fundamental_cycles(ring_atoms, ring_adj):
    """Spanning-tree fundamental cycles; completes the basis when Horton
    candidates fall short on highly symmetric graphs."""
    seen = set()
    for start in ring_atoms:
        if start in seen:
            continue
        dist, parent = _bfs_tree(start, ring_adj)
        seen.update(dist)
        tree = {frozenset((a, p)) for a, p in parent.items() if p is not None}
        for a in dist:
            for b in ring_adj[a]:
                if a < b and frozenset((a, b)) not in tree:
                    pa = _path_to_root(a, parent)
                    pb = _path_to_root(b, parent)
                    shared = [v for v in pa if v in set(pb)]
                    meet = shared[0]
                    ca = pa[:pa.index(meet)]
                    cb = pb[:pb.index(meet)]
                    yield list(reversed(ca)) + [meet] + cb


def _cycle_edge_mask(cycle, edge_index):
    mask = 0
    for i, atom in enumerate(cycle):
        nxt = cycle[(i + 1) % len(cycle)]
        idx = edge_index.get(frozenset((atom, nxt)))
        if idx is None:
            return None
        mask |= 1 << idx
    return mask


def sssr(n_atoms, adjacency, bonds):
    """Smallest set of smallest rings as ordered atom-index tuples.

    Returns exactly (bonds - atoms + components) independent cycles,
    preferring shorter ones, with deterministic tie-breaking.
    """
    comps = 0
    seen = [False] * n_atoms
    for i in range(n_atoms):
        if not seen[i]:
            comps += 1
            queue = deque([i])
            seen[i] = True
            while queue:
                node = queue.popleft()
                for nbr in adjacency[node]:
                    if not seen[nbr]:
                        seen[nbr] = True
                        queue.append(nbr)
    n_rings = len(bonds) - n_atoms + comps
    if n_rings <= 0:
        return []

    bridges = find_bridges(n_atoms, adjacency)
    ring_edges = [frozenset(b) for b in bonds if frozenset(b) not in bridges]
    ring_atoms = sorted({a for e in ring_edges for a in e})
    ring_adj = {a: sorted(n for n in adjacency[a]
                          if frozenset((a, n)) not in bridges)
                for a in ring_atoms}
    edge_index = {e: i for i, e in enumerate(sorted(ring_edges, key=sorted))}

    candidates = {}
    for cyc in _candidate_cycles(ring_atoms, ring_adj, ring_edges):
        mask = _cycle_edge_mask(cyc, edge_index)
        if mask is not None and mask not in candidates:
            candidates[mask] = cyc
    ordered = sorted(candidates.items(),
                     key=lambda kv: (len(kv[1]), sorted(kv[1]), kv[1]))

    basis = _XorBasis()
    selected = []
    for mask, cyc in ordered:
        if basis.add(mask):
            selected.append(tuple(cyc))
            if len(selected) == n_rings:
                return selected
    for cyc in _fundamental_cycles(ring_atoms, ring_adj):
        mask = _cycle_edge_mask(cyc, edge_index)
        if mask is not None and basis.add(mask):
            selected.append(tuple(cyc))
            if len(selected) == n_rings:
                break
    return selected
