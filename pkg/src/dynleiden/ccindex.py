"""Connectivity index over sub-communities, maintained under edge churn.

Tracks, for one level graph, the edges whose endpoints share a sub-community
and the connected components those edges induce inside each sub. Insertions
union components in near-constant time; deletions run a balanced two-sided
search from both endpoints and relabel the exhausted side, so the cost is
bounded by the smaller resulting component rather than the whole sub.

The index is the authority on the current sub assignment: callers reassign
vertices between subs through it so membership, components, and the edge set
can never drift apart. Self-loops are never indexed (they cannot affect
connectivity), and edge weights are not stored here — only existence matters.
"""

from __future__ import annotations

from collections import deque

from .graph import Graph


class EdgeNotInIndex(Exception):
    """Raised when deleting an edge the index does not hold."""


class CCIndex:
    __slots__ = ("sub_of", "sub_members", "iadj", "comp_of", "comp_members", "_next_comp")

    def __init__(self, g: Graph, s: dict[int, int]):
        self.sub_of: dict[int, int] = {}
        self.sub_members: dict[int, set[int]] = {}
        for v in g.vertices():
            sub = s[v]
            self.sub_of[v] = sub
            self.sub_members.setdefault(sub, set()).add(v)
        self.iadj: dict[int, set[int]] = {v: set() for v in self.sub_of}
        for u, v, _w in g.edges():
            if u != v and self.sub_of[u] == self.sub_of[v]:
                self.iadj[u].add(v)
                self.iadj[v].add(u)
        self.comp_of: dict[int, int] = {}
        self.comp_members: dict[int, set[int]] = {}
        self._next_comp = 0
        for members in self.sub_members.values():
            for v in members:
                if v in self.comp_of:
                    continue
                label = self._next_comp
                self._next_comp += 1
                comp = {v}
                queue = deque([v])
                self.comp_of[v] = label
                while queue:
                    x = queue.popleft()
                    for y in self.iadj[x]:
                        if y not in comp:
                            comp.add(y)
                            self.comp_of[y] = label
                            queue.append(y)
                self.comp_members[label] = comp

    # -- queries ---------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.iadj.get(u, ())

    def neighbors(self, v: int) -> set[int]:
        return self.iadj.get(v, set())

    def members(self, sub: int) -> set[int]:
        return self.sub_members.get(sub, set())

    def components_of(self, sub: int) -> list[set[int]]:
        groups: dict[int, set[int]] = {}
        for v in self.sub_members.get(sub, ()):
            groups.setdefault(self.comp_of[v], set()).add(v)
        return list(groups.values())

    def split_components(self, sub: int) -> list[tuple[set[int], bool]]:
        """Components of a sub, flagged so exactly the first keeps the id.

        The largest component keeps; ties go to the component holding the
        smallest vertex.
        """
        comps = self.components_of(sub)
        comps.sort(key=lambda c: (-len(c), min(c)))
        return [(c, i == 0) for i, c in enumerate(comps)]

    # -- mutations -------------------------------------------------------

    def add_vertex(self, v: int, sub: int) -> None:
        if v in self.sub_of:
            raise ValueError(f"vertex {v} already indexed")
        self.sub_of[v] = sub
        self.sub_members.setdefault(sub, set()).add(v)
        self.iadj[v] = set()
        label = self._next_comp
        self._next_comp += 1
        self.comp_of[v] = label
        self.comp_members[label] = {v}

    def insert_edge(self, u: int, v: int) -> bool:
        """Index an intra-sub edge; never splits, so always returns False."""
        if u == v or v in self.iadj[u]:
            return False
        self.iadj[u].add(v)
        self.iadj[v].add(u)
        cu, cv = self.comp_of[u], self.comp_of[v]
        if cu == cv:
            return False
        # relabel the smaller component
        if len(self.comp_members[cu]) < len(self.comp_members[cv]):
            cu, cv = cv, cu
        absorbed = self.comp_members.pop(cv)
        for x in absorbed:
            self.comp_of[x] = cu
        self.comp_members[cu] |= absorbed
        return False

    def delete_edge(self, u: int, v: int) -> bool:
        """Drop an indexed edge; True when its component fell apart.

        Runs frontier searches from both endpoints, always growing the side
        that has seen fewer vertices; if one side exhausts before meeting the
        other, that side is a new component and gets a fresh label.
        """
        if u == v or v not in self.iadj.get(u, ()):
            raise EdgeNotInIndex(f"({u}, {v}) is not an indexed intra-sub edge")
        self.iadj[u].discard(v)
        self.iadj[v].discard(u)
        seen_a, seen_b = {u}, {v}
        fr_a, fr_b = deque([u]), deque([v])
        while fr_a and fr_b:
            if len(seen_a) <= len(seen_b):
                fr, seen, other = fr_a, seen_a, seen_b
            else:
                fr, seen, other = fr_b, seen_b, seen_a
            for _ in range(len(fr)):
                x = fr.popleft()
                for y in self.iadj[x]:
                    if y in other:
                        return False
                    if y not in seen:
                        seen.add(y)
                        fr.append(y)
        side = seen_a if not fr_a else seen_b
        old = self.comp_of[u]
        label = self._next_comp
        self._next_comp += 1
        for x in side:
            self.comp_of[x] = label
        self.comp_members[label] = side
        self.comp_members[old] -= side
        if not self.comp_members[old]:
            del self.comp_members[old]
        return True

    def reassign(self, vertices, new_sub: int) -> None:
        """Move vertices to another sub. Component labels are untouched;
        callers re-index any edges that become intra-sub afterwards."""
        for v in vertices:
            old = self.sub_of[v]
            if old == new_sub:
                continue
            members = self.sub_members[old]
            members.discard(v)
            if not members:
                del self.sub_members[old]
            self.sub_of[v] = new_sub
            self.sub_members.setdefault(new_sub, set()).add(v)


def build_cc_index(g: Graph, s: dict[int, int]) -> CCIndex:
    return CCIndex(g, s)


def cc_update_edge(index: CCIndex, u: int, v: int, present: bool) -> bool:
    """Apply one edge-existence change; True when a deletion split a sub.

    Only intra-sub pairs reach the index; cross-sub pairs and self-loops are
    no-ops here by construction, so callers filter before calling.
    """
    if present:
        return index.insert_edge(u, v)
    return index.delete_edge(u, v)
