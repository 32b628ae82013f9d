"""Splitting sets, witness sets, edge weights and the potential function.

A splitting set K of a blowup graph X is an edge set whose complement,
restricted to any copy, is a forest in which every tree holds exactly one
terminal and every non-terminal vertex lies in such a tree (equivalently:
the complement is a spanning tree of the copy with all terminals
contracted together).  Edges of K are "core" edges, the complement are
"cleanup" edges.

Witness sets: W(e) = {e} for core e.  For a cleanup edge e, the far side
of e is the side of its cleanup tree away from that tree's terminal;
W(e) is the set of core edges of the same copy incident to a far-side
vertex.  Weights on core edges:

    w(e) = c(e) + sum of c(f)/|W(f)| over cleanup f with e in W(f)

which conserves total cost.  The potential is
Phi = sum over all edges of c(e) * H(|W(e)|) with H the harmonic numbers.

Splitting strategies: uniformly random per-node choices, a quasi-
bipartite cheapest-edge rule, and an exact dynamic program minimizing
Phi (per copy, over rooted partial trees).
"""

import random as _random

from .ratio import Rat, R0, harmonic
from .hyperlp import BlowupGraph, BlowupEdge, BlowupCopy


class SplittingError(ValueError):
    pass


class SplittingState:
    """K plus derived data, all relative to one blowup graph."""

    __slots__ = ("X", "K", "witness", "weights", "binarized")

    def __init__(self, X, K, witness, weights, binarized=False):
        self.X = X
        self.K = frozenset(K)
        self.witness = dict(witness)   # cleanup edge id -> frozenset of core ids
        self.weights = dict(weights)   # core edge id -> rational
        self.binarized = binarized

    @property
    def potential(self):
        phi = R0
        for eid, e in self.X.edges.items():
            if eid in self.K:
                phi += e.cost
            else:
                phi += e.cost * harmonic(len(self.witness[eid]))
        return phi

    def weight_of(self, B):
        return sum((self.weights[e] for e in B), R0)


# ---- witnesses and weights ----------------------------------------------


def compute_witnesses_and_weights(X, K, binarized=False):
    """Validate K as a splitting set and build witness sets and weights."""
    K = frozenset(K)
    if not K <= set(X.edges):
        raise SplittingError("K contains unknown edges")
    witness = {}
    for copy in X.copies:
        _copy_witnesses(X, copy, K, witness)
    weights = {e: X.edges[e].cost for e in K}
    for f, W in witness.items():
        share = X.edges[f].cost / len(W)
        for e in W:
            weights[e] += share
    total = sum(weights.values(), R0)
    assert total == X.total_cost(), "weight conservation failed"
    return SplittingState(X, K, witness, weights, binarized)


def _copy_witnesses(X, copy, K, witness):
    cleanup = [e for e in copy.edge_ids if e not in K]
    core = [e for e in copy.edge_ids if e in K]
    # cleanup forest: acyclic, every tree exactly one terminal, every
    # non-terminal covered
    parent = {v: v for v in copy.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    adj = {v: [] for v in copy.vertices}
    for eid in cleanup:
        e = X.edges[eid]
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            raise SplittingError("cleanup edges contain a cycle in copy %d" % copy.id)
        parent[ru] = rv
        adj[e.u].append((e.v, eid))
        adj[e.v].append((e.u, eid))
    groups = {}
    for v in copy.vertices:
        groups.setdefault(find(v), []).append(v)
    term_of = {}
    for g in groups.values():
        ts = [v for v in g if v in X.R]
        if len(ts) > 1:
            raise SplittingError("cleanup piece with %d terminals in copy %d"
                                 % (len(ts), copy.id))
        if not ts:
            raise SplittingError("cleanup piece without terminal in copy %d"
                                 % copy.id)
        for v in g:
            term_of[v] = ts[0]
    incident_core = {v: [] for v in copy.vertices}
    for eid in core:
        e = X.edges[eid]
        incident_core[e.u].append(eid)
        incident_core[e.v].append(eid)
    # orient each cleanup tree away from its terminal; far side of a
    # cleanup edge = subtree below its lower endpoint
    for root in {term_of[v] for v in copy.vertices}:
        order = []
        par_edge = {root: None}
        stack = [root]
        seen = {root}
        while stack:
            u = stack.pop()
            order.append(u)
            for v, eid in adj[u]:
                if v not in seen:
                    seen.add(v)
                    par_edge[v] = eid
                    stack.append(v)
        # subtree core-incidence sets, children before parents
        sub = {v: set(incident_core[v]) for v in order}
        for v in reversed(order):
            if v == root:
                continue
            eid = par_edge[v]
            W = frozenset(sub[v])
            if not W:
                raise SplittingError("cleanup edge %d has empty witness set" % eid)
            witness[eid] = W
            # merge into parent: find parent endpoint
            e = X.edges[eid]
            p = e.other(v)
            sub[p] |= sub[v]


# ---- strategies ----------------------------------------------------------


def quasi_bipartite_splitting_set(X):
    """Cheapest-edge rule for star copies: per copy, every edge is core
    except one cheapest edge (tie: smallest edge id).  Gives
    Phi <= (73/60) * cost(X)."""
    K = set()
    for copy in X.copies:
        _require_star(X, copy)
        if len(copy.edge_ids) == 1:
            K.update(copy.edge_ids)
            continue
        emin = min(copy.edge_ids, key=lambda eid: (X.edges[eid].cost, eid))
        K.update(e for e in copy.edge_ids if e != emin)
    state = compute_witnesses_and_weights(X, K)
    cost = X.total_cost()
    assert 60 * state.potential <= 73 * cost, "quasi-bipartite bound violated"
    return state


def _require_star(X, copy):
    terms = X.copy_terminals(copy)
    nonterm = [v for v in copy.vertices if v not in terms]
    if len(copy.edge_ids) == 1 and not nonterm:
        return  # single terminal-terminal edge
    if len(nonterm) != 1:
        raise SplittingError("copy %d is not a star" % copy.id)
    c = nonterm[0]
    for eid in copy.edge_ids:
        e = X.edges[eid]
        if c not in (e.u, e.v):
            raise SplittingError("copy %d is not a star" % copy.id)


def binarize(X):
    """Replace every non-terminal of degree > 3 with a chain of degree-3
    nodes joined by zero-cost auxiliary edges.  Edge ids are fresh; each
    non-auxiliary edge remembers the edge it came from via .orig set to
    ("bin", source id).  Cost is unchanged."""
    vid = X._next_vid
    eid = 0
    cid = 0
    copies = []
    edges = {}
    for copy in X.copies:
        deg = {v: [] for v in copy.vertices}
        for e in copy.edge_ids:
            deg[X.edges[e].u].append(e)
            deg[X.edges[e].v].append(e)
        # port assignment: every (vertex, incident edge) pair maps to a
        # concrete node of the expanded copy
        port = {}
        vs = set()
        aux = []  # zero-cost edges (u, v)
        for v in sorted(copy.vertices):
            inc = sorted(deg[v])
            if v in X.R or len(inc) <= 3:
                for e in inc:
                    port[(v, e)] = v
                vs.add(v)
                continue
            chain = [v]
            for _ in range(len(inc) - 3):
                chain.append(vid)
                vid += 1
            vs.update(chain)
            for a, b in zip(chain, chain[1:]):
                aux.append((a, b))
            port[(v, inc[0])] = chain[0]
            port[(v, inc[1])] = chain[0]
            for i, e in enumerate(inc[2:-1]):
                port[(v, e)] = chain[min(i + 1, len(chain) - 1)]
            port[(v, inc[-1])] = chain[-1]
        e_ids = []
        for src in copy.edge_ids:
            e = X.edges[src]
            edges[eid] = BlowupEdge(eid, port[(e.u, src)], port[(e.v, src)],
                                    e.cost, cid, orig=("bin", src))
            e_ids.append(eid)
            eid += 1
        for (a, b) in aux:
            edges[eid] = BlowupEdge(eid, a, b, R0, cid, orig=None, aux=True)
            e_ids.append(eid)
            eid += 1
        copies.append(BlowupCopy(cid, e_ids, vs, ("b", copy.shape)))
        cid += 1
    return BlowupGraph(X.N, X.R, copies, edges, vid, eid, cid)


def _rooted(X, copy):
    """Root a copy at its smallest terminal; returns (root, children map,
    parent edge map)."""
    terms = sorted(X.copy_terminals(copy))
    if not terms:
        raise SplittingError("copy %d has no terminals" % copy.id)
    root = terms[0]
    adj = {v: [] for v in copy.vertices}
    for eid in copy.edge_ids:
        e = X.edges[eid]
        adj[e.u].append((e.v, eid))
        adj[e.v].append((e.u, eid))
    children = {v: [] for v in copy.vertices}
    stack = [root]
    seen = {root}
    while stack:
        u = stack.pop()
        for v, eid in sorted(adj[u], key=lambda t: t[1]):
            if v not in seen:
                seen.add(v)
                children[u].append((v, eid))
                stack.append(v)
    return root, children


def random_splitting_set(X, seed):
    """Random core/cleanup assignment: per copy the minimum-id edge is the
    root edge (always core); every non-terminal picks exactly one of its
    child edges (relative to the root edge) as its cleanup edge,
    uniformly at random; all other edges are core.

    On copies whose non-terminals branch (degree 3 after binarization)
    every non-root edge is core with probability 1/2."""
    rng = _random.Random(seed)
    K = set()
    for copy in X.copies:
        K.update(_random_copy(X, copy, rng))
    return compute_witnesses_and_weights(X, K)


def _random_copy(X, copy, rng):
    if len(copy.edge_ids) == 1:
        return set(copy.edge_ids)
    root_eid = min(copy.edge_ids)
    e = X.edges[root_eid]
    adj = {v: [] for v in copy.vertices}
    for eid in copy.edge_ids:
        g = X.edges[eid]
        adj[g.u].append((g.v, eid))
        adj[g.v].append((g.u, eid))
    # orient away from the root edge
    children = {}
    seen = {e.u, e.v}
    stack = [e.u, e.v]
    while stack:
        u = stack.pop()
        kids = []
        for v, eid in sorted(adj[u], key=lambda t: t[1]):
            if eid != root_eid and v not in seen:
                seen.add(v)
                kids.append((v, eid))
                stack.append(v)
        children[u] = kids
    core = set(copy.edge_ids)
    for u in sorted(children):
        if u in X.R:
            continue
        kids = children[u]
        if not kids:
            continue
        pick = kids[rng.randrange(len(kids))][1]
        core.discard(pick)
    return core


# ---- exact DP ------------------------------------------------------------


class _Entry:
    __slots__ = ("val", "info")

    def __init__(self, val, info):
        self.val = val
        self.info = info  # ("base",) | ("ext", eid, kind, child) | ("merge", a, b)


def _better(cur, cand):
    return cur is None or cand.val < cur.val


def optimal_splitting_set(X):
    """Minimum-potential splitting set by per-copy dynamic programming.

    Requires every non-terminal to have degree <= 3 in its copy (run
    binarize first).  The DP processes rooted partial trees with two
    table families: type A (the root's cleanup piece already holds its
    terminal) indexed by the number of core edges that will end up
    incident to that piece from outside the partial tree, and type B (no
    terminal yet) indexed by the number of inside core edges incident to
    the root's piece.  Value ties keep the first candidate in a fixed
    deterministic scan order (extensions before merges, smaller indices
    first)."""
    K = set()
    memo = {}
    for copy in X.copies:
        for v in copy.vertices:
            if v not in X.R:
                d = sum(1 for eid in copy.edge_ids
                        if v in (X.edges[eid].u, X.edges[eid].v))
                if d > 3:
                    raise SplittingError(
                        "copy %d has a non-terminal of degree %d; binarize first"
                        % (copy.id, d))
        key = copy.shape
        if key in memo:
            pattern = memo[key]
        else:
            pattern = _dp_copy(X, copy)
            memo[key] = pattern
        # pattern: set of positions (indices into copy.edge_ids) that are core
        K.update(copy.edge_ids[i] for i in pattern)
    return compute_witnesses_and_weights(X, K)


def _dp_copy(X, copy):
    root, children = _rooted(X, copy)
    M = len(copy.edge_ids)
    pos = {eid: i for i, eid in enumerate(copy.edge_ids)}

    def tables(v):
        """(A, B) tables for the partial tree = v plus everything below."""
        # base at v
        if v in X.R:
            base_e = _Entry(R0, ("base",))
            A = {a: base_e for a in range(M + 1)}
            B = {}
        else:
            A = {}
            B = {0: _Entry(R0, ("base",))}
        for (u, eid) in children[v]:
            Au, Bu = tables(u)
            A2, B2 = _extend(X, v, eid, Au, Bu, M)
            A, B = _merge(v in X.R, A, B, A2, B2, M)
        return A, B

    A, B = tables(root)
    best = A.get(0)
    if best is None:
        raise SplittingError("copy %d admits no splitting set" % copy.id)
    cleanup = set()

    def collect(entry):
        info = entry.info
        if info[0] == "base":
            return
        if info[0] == "merge":
            collect(info[1])
            collect(info[2])
            return
        _, eid, kind, child = info
        if kind == "clean":
            cleanup.add(eid)
        collect(child)

    collect(best)
    return {pos[eid] for eid in copy.edge_ids if eid not in cleanup}


def _extend(X, v, eid, Au, Bu, M):
    """Tables for the tree consisting of v, the edge eid = (v, u), and u's
    partial tree."""
    c = X.edges[eid].cost
    A2, B2 = {}, {}
    if v not in X.R:
        # core edge: the child side must already own a terminal and sees
        # exactly this one outside core edge
        ch = Au.get(1)
        if ch is not None:
            cand = _Entry(ch.val + c, ("ext", eid, "core", ch))
            if _better(B2.get(1), cand):
                B2[1] = cand
        # cleanup edge continuing the child's terminal piece up to v
        for a in range(1, M + 1):
            ch = Au.get(a)
            if ch is not None:
                cand = _Entry(ch.val + c * harmonic(a), ("ext", eid, "clean", ch))
                if _better(A2.get(a), cand):
                    A2[a] = cand
        # cleanup edge over a terminal-less child piece
        for b, ch in sorted(Bu.items()):
            if b >= 1:
                cand = _Entry(ch.val + c * harmonic(b), ("ext", eid, "clean", ch))
                if _better(B2.get(b), cand):
                    B2[b] = cand
    else:
        # v is a terminal (only the overall root): its piece closes here
        best = None
        ch = Au.get(1)
        if ch is not None:
            cand = _Entry(ch.val + c, ("ext", eid, "core", ch))
            if _better(best, cand):
                best = cand
        for b, ch in sorted(Bu.items()):
            if b >= 1:
                cand = _Entry(ch.val + c * harmonic(b), ("ext", eid, "clean", ch))
                if _better(best, cand):
                    best = cand
        if best is not None:
            A2 = {a: best for a in range(M + 1)}
    return A2, B2


def _merge(root_is_terminal, A1, B1, A2, B2, M):
    """Combine two partial trees sharing only their root."""
    if root_is_terminal:
        # terminals are leaves; a merge at a terminal only happens when one
        # side is the empty base table
        if not B1 and not B2:
            A = {}
            for a in range(M + 1):
                e1, e2 = A1.get(a), A2.get(a)
                if e1 is not None and e2 is not None:
                    if e1.info == ("base",):
                        A[a] = e2
                    elif e2.info == ("base",):
                        A[a] = e1
                    else:
                        raise SplittingError("terminal with two incident "
                                             "cleanup/core structures")
            return A, {}
        raise SplittingError("unexpected merge at a terminal")
    A, B = {}, {}
    for a1, e1 in sorted(A1.items()):
        for b2, e2 in sorted(B2.items()):
            a = a1 - b2
            if 0 <= a <= M:
                cand = _Entry(e1.val + e2.val, ("merge", e1, e2))
                if _better(A.get(a), cand):
                    A[a] = cand
    for b1, e1 in sorted(B1.items()):
        for a2, e2 in sorted(A2.items()):
            a = a2 - b1
            if 0 <= a <= M:
                cand = _Entry(e1.val + e2.val, ("merge", e1, e2))
                if _better(A.get(a), cand):
                    A[a] = cand
    for b1, e1 in sorted(B1.items()):
        for b2, e2 in sorted(B2.items()):
            if b1 + b2 <= M:
                cand = _Entry(e1.val + e2.val, ("merge", e1, e2))
                if _better(B.get(b1 + b2), cand):
                    B[b1 + b2] = cand
    return A, B


# ---- back-mapping after binarization -------------------------------------


def map_back(X, Xb, state_b):
    """Carry a splitting set chosen on binarize(X) back to X.

    Auxiliary edges are dropped; every real edge keeps its status.  A
    non-terminal of X whose expansion chain mixed statuses can end up
    with several cleanup paths to terminals; following the pruning rule,
    only the cheapest such path survives (ties: smaller first-edge id)
    and the first edge of every other path turns core.  Iterates until K
    is valid, then recomputes witnesses on X."""
    src = {}
    for eid, e in Xb.edges.items():
        if e.orig is not None and not e.aux:
            src[eid] = e.orig[1]
    K = {src[eid] for eid in state_b.K if eid in src}
    cleanup = set(X.edges) - K
    for _ in range(len(X.edges) + 1):
        moved = _prune_multi_paths(X, cleanup)
        if not moved:
            break
        cleanup -= moved
    else:
        raise SplittingError("back-mapping did not stabilize")
    return compute_witnesses_and_weights(X, set(X.edges) - cleanup)


def _prune_multi_paths(X, cleanup):
    """One pruning round: in every cleanup piece holding several terminals,
    pick the smallest non-terminal whose incident cleanup edges lead to
    terminals in at least two directions, keep the direction offering the
    cheapest terminal path (tie: smaller first-edge id) and cut the first
    edge of every other direction.  Returns the cut edges, empty when K
    is already valid."""
    moved = set()
    for copy in X.copies:
        adj = {v: [] for v in copy.vertices}
        for eid in copy.edge_ids:
            if eid in cleanup:
                e = X.edges[eid]
                adj[e.u].append((e.v, eid))
                adj[e.v].append((e.u, eid))
        seen_global = set()
        for v0 in sorted(copy.vertices):
            if v0 in seen_global:
                continue
            piece = {v0}
            stack = [v0]
            while stack:
                u = stack.pop()
                for w, _ in adj[u]:
                    if w not in piece:
                        piece.add(w)
                        stack.append(w)
            seen_global |= piece
            if sum(1 for t in piece if t in X.R) <= 1:
                continue
            for u in sorted(p for p in piece if p not in X.R):
                dirs = []
                for w, eid in sorted(adj[u], key=lambda t: t[1]):
                    d = _cheapest_terminal_path(X, adj, u, w, eid)
                    if d is not None:
                        dirs.append((d, eid))
                if len(dirs) >= 2:
                    dirs.sort()
                    for _, eid in dirs[1:]:
                        moved.add(eid)
                    break
    return moved


def _cheapest_terminal_path(X, adj, u, w0, eid0):
    """Cheapest cost of a cleanup path from u through its incident edge
    eid0, ending at a terminal; None if that direction has no terminal.
    Returned as (cost, eid0) for direct tie-breaking."""
    best = None
    stack = [(w0, eid0, X.edges[eid0].cost)]
    while stack:
        u1, came, acc = stack.pop()
        if u1 in X.R:
            if best is None or acc < best:
                best = acc
            continue
        for w, eid in adj[u1]:
            if eid != came:
                stack.append((w, eid, acc + X.edges[eid].cost))
    return None if best is None else (best, eid0)
