"""Subgroup machinery over a full element table.

Everything here works with :class:`SubgroupSet` bit-vectors over the stable
element IDs of one ambient group.  The centerpiece is a complete
maximal-subgroup enumeration by ascending join-closure: a worklist of
subgroup conjugacy classes, seeded with the cyclic subgroups, where each
class representative H is extended by generators ⟨H, x⟩ until either some
extension stays proper (H is not maximal; the extension is a newly
discovered subgroup) or every extension generates the whole group (H is
maximal).  Processing one representative per conjugacy class is sound
because joins of conjugates are conjugates of joins; whole conjugate orbits
are pushed in one step.

The same worklist discovers every subgroup of the ambient group, which the
chief-series, complement, and supplement computations then reuse.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExhaustedError,
    InvariantError,
    NoComplementError,
    NoSupplementError,
)
from .group import (
    DEFAULT_ELEMENT_CAP,
    ElementTable,
    PermGroup,
    StabilizerChain,
    center,
)
from .perm import Permutation
from .subgroup import SubgroupSet, bits_from_ids

DEFAULT_JOIN_BUDGET = 10**7


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _row_tuple(table: ElementTable, i: int) -> tuple[int, ...]:
    return tuple(int(x) for x in table.rows[i])


def _chain_of_ids(table: ElementTable, gen_ids) -> StabilizerChain:
    return StabilizerChain.build(
        [_row_tuple(table, int(i)) for i in gen_ids], table.degree
    )


def _chain_element_rows(chain: StabilizerChain, table: ElementTable) -> np.ndarray:
    """Every element of the chain's group as an image row (order unspecified)."""
    dtype = table.rows.dtype
    rows = np.arange(table.degree, dtype=dtype)[None, :]
    for lvl in reversed(chain.levels):
        us = np.array([lvl.transversal[b] for b in lvl.orbit], dtype=dtype)
        # compose(e, u): apply e then u, i.e. u[e], for every pair
        rows = us[:, rows].reshape(-1, table.degree)
    return rows


def _subgroup_from_chain(
    table: ElementTable, chain: StabilizerChain, gen_ids: list[int]
) -> SubgroupSet:
    ids = table.lookup_rows(_chain_element_rows(chain, table))
    S = SubgroupSet(table, bits_from_ids(ids), gen_ids=gen_ids)
    if S.order != chain.order():
        raise InvariantError("materialized subgroup order disagrees with its chain")
    return S


def generated_subgroup(table: ElementTable, gen_ids) -> SubgroupSet:
    """The subgroup generated by the given element IDs."""
    gen_ids = [int(i) for i in gen_ids]
    return _subgroup_from_chain(table, _chain_of_ids(table, gen_ids), gen_ids)


@dataclass(frozen=True)
class ChiefFactorRecord:
    """One step S/K of a maximal chain of normal subgroups, with complements.

    ``complement_count`` is the number of subgroups H of G with HS = G and
    H ∩ S = K, counted by exhaustive subgroup search in G/K.
    """

    S: SubgroupSet
    K: SubgroupSet
    factor_order: int
    complement_count: int


class SubgroupLattice:
    """Lazy subgroup-structure computations for one ambient group."""

    def __init__(
        self,
        G: PermGroup,
        cap: int = DEFAULT_ELEMENT_CAP,
        join_budget: int = DEFAULT_JOIN_BUDGET,
    ):
        self.group = G
        self.table = G.table(cap)
        self.join_budget = join_budget
        self.joins_spent = 0
        self._cyclic: list[SubgroupSet] | None = None
        self._elem_to_cyclic: np.ndarray | None = None
        self._maximal_cyclic: list[SubgroupSet] | None = None
        self._class_of: np.ndarray | None = None
        self._class_reps: list[int] | None = None
        self._maximal: list[SubgroupSet] | None = None
        self._all_subgroups: dict[bytes, SubgroupSet] | None = None
        self._normals: list[SubgroupSet] | None = None
        self._chief: list[ChiefFactorRecord] | None = None

    # -- cyclic subgroups ---------------------------------------------------

    def cyclic_subgroups(self) -> list[SubgroupSet]:
        """One SubgroupSet per distinct ⟨g⟩, trivial subgroup included."""
        if self._cyclic is None:
            self._build_cyclic()
        return self._cyclic

    def subgroup_of_element(self, eid: int) -> SubgroupSet:
        """The cyclic subgroup ⟨g⟩ for the element with this ID."""
        self.cyclic_subgroups()
        return self._cyclic[int(self._elem_to_cyclic[eid])]

    def _build_cyclic(self) -> None:
        T = self.table
        n = T.n
        elem_to = np.full(n, -1, dtype=np.int64)
        raw: list[tuple[SubgroupSet, list[int]]] = []
        for e in range(n):
            if elem_to[e] >= 0:
                continue
            ids = [T.identity_id]
            x = e
            while x != T.identity_id:
                ids.append(x)
                x = T.mul(x, e)
            m = len(ids)
            gens = [i for i in ids if T.orders[i] == m] or [T.identity_id]
            S = SubgroupSet(T, bits_from_ids(ids), gen_ids=[min(gens)])
            S.is_cyclic = True
            idx = len(raw)
            raw.append((S, gens))
            for g in gens:
                elem_to[g] = idx
        order = sorted(range(len(raw)), key=lambda i: raw[i][0].key)
        rank = {old: new for new, old in enumerate(order)}
        self._cyclic = [raw[i][0] for i in order]
        remap = np.array([rank[int(v)] for v in elem_to], dtype=np.int64)
        self._elem_to_cyclic = remap

    def maximal_cyclic_subgroups(self) -> list[SubgroupSet]:
        """Cyclic subgroups not properly contained in a larger cyclic one."""
        if self._maximal_cyclic is None:
            T = self.table
            cyc = self.cyclic_subgroups()
            non_maximal = [False] * len(cyc)
            for x in range(T.n):
                o = int(T.orders[x])
                for p in _prime_factors(o):
                    non_maximal[int(self._elem_to_cyclic[T.power(x, p)])] = True
            self._maximal_cyclic = [
                S for S, dead in zip(cyc, non_maximal) if not dead
            ]
        return self._maximal_cyclic

    # -- conjugacy ----------------------------------------------------------

    def element_classes(self) -> tuple[np.ndarray, list[int]]:
        """(class index per element ID, representative ID per class)."""
        if self._class_of is None:
            T = self.table
            tables = T.conj_by_gen()
            class_of = np.full(T.n, -1, dtype=np.int64)
            reps: list[int] = []
            for e in range(T.n):
                if class_of[e] >= 0:
                    continue
                cls = len(reps)
                reps.append(e)
                stack = [e]
                class_of[e] = cls
                while stack:
                    x = stack.pop()
                    for ct in tables:
                        y = int(ct[x])
                        if class_of[y] < 0:
                            class_of[y] = cls
                            stack.append(y)
            self._class_of = class_of
            self._class_reps = reps
        return self._class_of, self._class_reps

    def conjugates(self, S: SubgroupSet) -> list[SubgroupSet]:
        """The full conjugacy orbit of a subgroup, sorted by key."""
        T = self.table
        tables = T.conj_by_gen()
        seen: dict[bytes, SubgroupSet] = {S.key: S}
        frontier = [S]
        while frontier:
            nxt = []
            for H in frontier:
                for ct in tables:
                    ids = ct[H.ids]
                    bits = bits_from_ids(ids)
                    C = SubgroupSet(
                        T,
                        bits,
                        gen_ids=[int(ct[g]) for g in H.gen_ids],
                    )
                    if C.key not in seen:
                        C.is_cyclic = H.is_cyclic
                        seen[C.key] = C
                        nxt.append(C)
            frontier = nxt
        return sorted(seen.values(), key=lambda x: x.key)

    def is_normal(self, S: SubgroupSet) -> bool:
        if S.is_normal is None:
            T = self.table
            S.is_normal = all(
                bits_from_ids(ct[S.ids]) == S.bits for ct in T.conj_by_gen()
            )
        return S.is_normal

    # -- maximal subgroups via ascending join-closure -----------------------

    def maximal_subgroups(self) -> list[SubgroupSet]:
        """Complete list of maximal subgroups, sorted by bit-vector key."""
        if self._maximal is None:
            self._run_worklist()
        return self._maximal

    def all_subgroups(self) -> list[SubgroupSet]:
        """Every subgroup of the ambient group except the group itself."""
        if self._all_subgroups is None:
            self._run_worklist()
        return sorted(self._all_subgroups.values(), key=lambda s: s.key)

    def _spend_join(self) -> None:
        self.joins_spent += 1
        if self.joins_spent > self.join_budget:
            raise BudgetExhaustedError(
                "maximal-subgroup enumeration", self.join_budget
            )

    def _run_worklist(self) -> None:
        T = self.table
        n = T.n
        trivial = SubgroupSet(T, bits_from_ids([T.identity_id]), gen_ids=[])
        trivial.is_cyclic = True
        trivial.is_normal = True
        discovered: dict[bytes, SubgroupSet] = {trivial.key: trivial}
        maximal: list[SubgroupSet] = []

        if n == 1:
            self._all_subgroups = {}
            self._maximal = []
            return

        cyclics = self.cyclic_subgroups()
        cyc_key = {S.key for S in cyclics}
        queue: list[tuple[int, bytes]] = []
        queued: set[bytes] = set()

        def push_class(S: SubgroupSet) -> None:
            """Record S's whole conjugacy orbit; enqueue its representative."""
            if S.key in discovered:
                return
            orbit = self.conjugates(S)
            normal = len(orbit) == 1
            for C in orbit:
                C.is_normal = normal
                if C.is_cyclic is None:
                    C.is_cyclic = C.key in cyc_key
                discovered[C.key] = C
            rep = orbit[0]
            if rep.key not in queued:
                queued.add(rep.key)
                heapq.heappush(queue, (rep.order, rep.key))

        for S in cyclics:
            if not S.is_trivial_subgroup() and not S.is_whole_group():
                push_class(S)

        while queue:
            _, key = heapq.heappop(queue)
            rep = discovered[key]
            self._process_class(rep, discovered, push_class, maximal)

        if not maximal and n > 1:
            # No proper non-trivial subgroup at all: |G| is prime and the
            # trivial subgroup is the unique maximal subgroup.
            trivial.is_maximal = True
            maximal.append(trivial)

        self._all_subgroups = discovered
        self._maximal = sorted(maximal, key=lambda s: s.key)

    def _process_class(self, H, discovered, push_class, maximal) -> None:
        T = self.table
        n = T.n
        chain_H = _chain_of_ids(T, H.gen_ids)
        index = n // H.order
        targets = self._targets_for(H, index)
        all_join_full = True
        for x in targets:
            self._spend_join()
            c2 = chain_H.copy()
            c2.add_generator(_row_tuple(T, x))
            if c2.order() == n:
                continue
            all_join_full = False
            J = _subgroup_from_chain(T, c2, H.gen_ids + [x])
            push_class(J)
        H.is_maximal = all_join_full
        if all_join_full:
            for C in self.conjugates(H):
                M = discovered[C.key]
                M.is_maximal = True
                maximal.append(M)
        else:
            for C in self.conjugates(H):
                discovered[C.key].is_maximal = False

    def _targets_for(self, H: SubgroupSet, index: int) -> list[int]:
        """Element IDs x whose joins ⟨H, x⟩ witness H's maximality status.

        Either one generator per cyclic subgroup not inside H, or one
        representative per non-trivial coset of H — whichever set is smaller —
        deduplicated under conjugation by H (valid because discovered joins
        are pushed as whole conjugacy orbits).
        """
        T = self.table
        cyclics = self.cyclic_subgroups()
        outside = [C for C in cyclics if C.bits & H.bits != C.bits]
        if len(outside) <= index - 1:
            seen: set[bytes] = set()
            targets = []
            for C in outside:
                if C.key in seen:
                    continue
                targets.append(C.gen_ids[0])
                stack = [C]
                seen.add(C.key)
                while stack:
                    D = stack.pop()
                    for h in H.gen_ids:
                        ids = T.conj_rows(D.ids, h)
                        bits = bits_from_ids(ids)
                        E = SubgroupSet(T, bits)
                        if E.key not in seen:
                            seen.add(E.key)
                            stack.append(E)
            return targets

        h_ids = H.ids
        in_seen = np.zeros(T.n, dtype=bool)
        in_seen[h_ids] = True
        targets = []
        handled: set[int] = set()
        for x in range(T.n):
            if in_seen[x]:
                continue
            coset = T.mul_many(h_ids, x)
            in_seen[coset] = True
            m = int(coset.min())
            if m in handled:
                continue
            targets.append(m)
            stack = [m]
            handled.add(m)
            while stack:
                y = stack.pop()
                for h in H.gen_ids:
                    z = T.conj(y, h)
                    zm = int(T.mul_many(h_ids, z).min())
                    if zm not in handled:
                        handled.add(zm)
                        stack.append(zm)
        return targets

    # -- normal structure ---------------------------------------------------

    def normal_closure(self, seed_ids) -> SubgroupSet:
        """Smallest normal subgroup containing the given elements."""
        T = self.table
        tables = T.conj_by_gen()
        orbit: set[int] = set()
        stack = [int(i) for i in seed_ids]
        orbit.update(stack)
        while stack:
            x = stack.pop()
            for ct in tables:
                y = int(ct[x])
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        chain = StabilizerChain(T.degree)
        kept: list[int] = []
        for g in sorted(orbit):
            if chain.add_generator(_row_tuple(T, g)):
                kept.append(g)
        S = _subgroup_from_chain(T, chain, kept)
        S.is_normal = True
        return S

    def normal_subgroups(self) -> list[SubgroupSet]:
        """All normal subgroups: join-closure of single-element normal closures."""
        if self._normals is None:
            T = self.table
            _, reps = self.element_classes()
            base: dict[bytes, SubgroupSet] = {}
            for r in reps:
                S = self.normal_closure([r])
                base.setdefault(S.key, S)
            closed = dict(base)
            frontier = list(base.values())
            while frontier:
                fresh: list[SubgroupSet] = []
                for A in frontier:
                    for B in list(closed.values()):
                        if A.bits | B.bits in (A.bits, B.bits):
                            continue
                        J = generated_subgroup(T, list(A.gen_ids) + list(B.gen_ids))
                        J.is_normal = True
                        if J.key not in closed:
                            closed[J.key] = J
                            fresh.append(J)
                frontier = fresh
            self._normals = sorted(closed.values(), key=lambda s: s.key)
        return self._normals

    def minimal_normal_subgroups(self) -> list[SubgroupSet]:
        normals = [
            S for S in self.normal_subgroups()
            if not S.is_trivial_subgroup() and not S.is_whole_group()
        ]
        if not normals:
            whole = [S for S in self.normal_subgroups() if S.is_whole_group()]
            return whole if self.table.n > 1 else []
        out = []
        for S in normals:
            if not any(
                O.order < S.order and O.bits & S.bits == O.bits for O in normals
            ):
                out.append(S)
        return out

    def socle(self) -> SubgroupSet:
        mins = self.minimal_normal_subgroups()
        if not mins:
            return SubgroupSet(
                self.table, bits_from_ids([self.table.identity_id]), gen_ids=[]
            )
        gen_ids: list[int] = []
        for S in mins:
            gen_ids.extend(int(i) for i in S.gen_ids)
        soc = generated_subgroup(self.table, gen_ids)
        soc.is_normal = True
        return soc

    def frattini(self) -> SubgroupSet:
        """Intersection of all maximal subgroups."""
        maxes = self.maximal_subgroups()
        if not maxes:
            return SubgroupSet(self.table, (1 << self.table.n) - 1)
        bits = maxes[0].bits
        for M in maxes[1:]:
            bits &= M.bits
        return SubgroupSet(self.table, bits)

    def centre(self) -> SubgroupSet:
        return center(self.group)

    # -- quotients ----------------------------------------------------------

    def quotient_with_map(self, N: SubgroupSet):
        """(G/N as a permutation group on right cosets, element->coset map)."""
        T = self.table
        if not self.is_normal(N):
            raise ValueError("quotient requires a normal subgroup")
        cached = self.group._cache.setdefault("quotients", {}).get(N.key)
        if cached is not None:
            return cached
        coset_of = np.full(T.n, -1, dtype=np.int64)
        reps: list[int] = []
        n_ids = N.ids
        for x in range(T.n):
            if coset_of[x] >= 0:
                continue
            idx = len(reps)
            reps.append(x)
            coset_of[T.mul_many(n_ids, x)] = idx
        degree = len(reps)
        gens = []
        for g in self.group.generators:
            gid = T.id_of_perm(g)
            images = [int(coset_of[T.mul(r, gid)]) + 1 for r in reps]
            gens.append(Permutation(images))
        name = f"{self.group.label()}/[order {N.order}]"
        Q = PermGroup(gens, degree=degree, name=name)
        if Q.order() != T.n // N.order:
            raise InvariantError("quotient order disagrees with the index")
        self.group._cache["quotients"][N.key] = (Q, coset_of)
        return Q, coset_of

    def quotient(self, N: SubgroupSet) -> PermGroup:
        return self.quotient_with_map(N)[0]

    # -- chief series and complements ---------------------------------------

    def chief_series(self) -> list[ChiefFactorRecord]:
        """A maximal chain of normal subgroups with complement counts."""
        if self._chief is None:
            T = self.table
            normals = self.normal_subgroups()
            records: list[ChiefFactorRecord] = []
            current = next(S for S in normals if S.is_trivial_subgroup())
            while not current.is_whole_group():
                above = [
                    S for S in normals
                    if S.order > current.order
                    and S.bits & current.bits == current.bits
                ]
                S = min(above, key=lambda s: (s.order, s.key))
                records.append(
                    ChiefFactorRecord(
                        S=S,
                        K=current,
                        factor_order=S.order // current.order,
                        complement_count=self._complement_count(S, current),
                    )
                )
                current = S
            self._chief = records
        return self._chief

    def _complement_count(self, S: SubgroupSet, K: SubgroupSet) -> int:
        """Number of H ≤ G with HS = G and H ∩ S = K, via search in G/K."""
        Q, coset_of = self.quotient_with_map(K)
        QT = Q.table(self.table.n)
        reps = _reps_from_coset_map(coset_of)
        image_ids = sorted(
            {_quotient_image_id(self.table, QT, coset_of, reps, int(g))
             for g in S.gen_ids}
        )
        s_image = generated_subgroup(QT, image_ids)
        want_order = QT.n // s_image.order
        qlat = lattice(Q, cap=self.table.n, join_budget=self.join_budget)
        ident = bits_from_ids([QT.identity_id])
        count = 0
        for H in qlat.all_subgroups():
            if H.order == want_order and H.bits & s_image.bits == ident:
                count += 1
        return count

    # -- supplements and the associated primitive group ---------------------

    def min_supplement_index(self, N: SubgroupSet) -> int:
        """Least index [G:H] over proper H with HN = G."""
        if not self.is_normal(N):
            raise ValueError("supplement search requires a normal subgroup")
        T = self.table
        n = T.n
        best = None
        for H in self.all_subgroups():
            prod = H.order * N.order // (H.bits & N.bits).bit_count()
            if prod == n:
                idx = n // H.order
                if best is None or idx < best:
                    best = idx
        if best is None:
            raise NoSupplementError(
                "no proper supplement: the normal subgroup lies in the Frattini"
            )
        return best

    def associated_primitive_monolithic(self, N: SubgroupSet) -> PermGroup:
        """The primitive monolithic group attached to a minimal normal N.

        Non-abelian N: the quotient by the centralizer of N.  Abelian N: the
        affine group N ⋊ (H / C_H(N)) on |N| points for a complement H.
        """
        T = self.table
        n_gens = [int(g) for g in N.gen_ids]
        if _is_abelian_subgroup(T, n_gens):
            comp = None
            ident = bits_from_ids([T.identity_id])
            want = T.n // N.order
            for H in self.all_subgroups():
                if H.order == want and H.bits & N.bits == ident:
                    comp = H
                    break
            if comp is None:
                raise NoComplementError(
                    "abelian minimal normal subgroup has no complement"
                )
            points = [int(i) for i in N.ids]
            pos = {e: i + 1 for i, e in enumerate(points)}
            gens = []
            for m in n_gens:
                gens.append(
                    Permutation([pos[int(y)] for y in T.mul_many(N.ids, m)])
                )
            for h in comp.gen_ids:
                gens.append(
                    Permutation([pos[int(y)] for y in T.conj_rows(N.ids, int(h))])
                )
            ch = _centralizer_within(T, comp.ids, n_gens)
            X = PermGroup(
                gens, degree=len(points), name=f"affine[{self.group.label()}]"
            )
            if X.order() != N.order * comp.order // ch:
                raise InvariantError("affine image order mismatch")
            return X
        cent = self.centralizer_of(N)
        if cent.is_trivial_subgroup():
            return self.group
        return self.quotient(cent)

    def centralizer_of(self, N: SubgroupSet) -> SubgroupSet:
        """Elements commuting with every member of N."""
        T = self.table
        mask = np.ones(T.n, dtype=bool)
        for m in N.gen_ids:
            mrow = T.rows[int(m)]
            # g commutes with m  <=>  the rows of m∘g and g∘m agree
            m_then_g = T.rows[:, mrow]
            g_then_m = mrow[T.rows]
            mask &= np.all(m_then_g == g_then_m, axis=1)
        ids = np.nonzero(mask)[0]
        S = SubgroupSet(T, bits_from_ids(ids))
        S.gen_ids = _small_generating_ids(T, ids)
        return S


def _quotient_image_id(T, QT, coset_of, reps, gid: int) -> int:
    """Element ID in the quotient table of the image of a group element."""
    images = [int(coset_of[T.mul(r, gid)]) + 1 for r in reps]
    q = QT.id_of_perm(Permutation(images))
    if q is None:
        raise InvariantError("projected element missing from quotient table")
    return q


def _reps_from_coset_map(coset_of: np.ndarray) -> list[int]:
    k = int(coset_of.max()) + 1
    reps = [-1] * k
    for x in range(len(coset_of)):
        c = int(coset_of[x])
        if reps[c] < 0:
            reps[c] = x
    return reps


def _small_generating_ids(T: ElementTable, ids) -> list[int]:
    """A short generating list for the subgroup formed by the given IDs."""
    chain = StabilizerChain(T.degree)
    kept: list[int] = []
    for i in ids:
        i = int(i)
        if i == T.identity_id:
            continue
        if chain.add_generator(_row_tuple(T, i)):
            kept.append(i)
    return kept


def _is_abelian_subgroup(T: ElementTable, gen_ids: list[int]) -> bool:
    return all(
        T.mul(a, b) == T.mul(b, a)
        for i, a in enumerate(gen_ids)
        for b in gen_ids[i + 1 :]
    )


def _centralizer_within(T: ElementTable, ids: np.ndarray, target_gens: list[int]) -> int:
    """How many of the given elements centralize every target generator."""
    count = 0
    for g in ids:
        g = int(g)
        if all(T.conj(m, g) == m for m in target_gens):
            count += 1
    return count


def lattice(
    G: PermGroup,
    cap: int = DEFAULT_ELEMENT_CAP,
    join_budget: int = DEFAULT_JOIN_BUDGET,
) -> SubgroupLattice:
    """The (cached) subgroup lattice helper for a group."""
    lat = G._cache.get("lattice")
    if lat is None:
        lat = SubgroupLattice(G, cap=cap, join_budget=join_budget)
        G._cache["lattice"] = lat
    return lat
