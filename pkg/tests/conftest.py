"""Shared helpers for the test suite."""

from __future__ import annotations

import pytest

from groupcover import MANIFEST, construct, lattice

from oracles import BruteGroup

_BRUTE_CACHE: dict[str, BruteGroup] = {}


def grp(spec: str):
    """Catalog group by spec string (cached by the package itself)."""
    return construct(spec)


def brute_of(spec: str, cap: int = 20000) -> BruteGroup:
    """An independently built multiplication-table copy of a catalog group."""
    bg = _BRUTE_CACHE.get(spec)
    if bg is None:
        T = grp(spec).table(cap)
        rows = [tuple(int(x) for x in T.rows[i]) for i in range(T.n)]
        bg = BruteGroup(rows)
        _BRUTE_CACHE[spec] = bg
    return bg


def subgroup_ids(S) -> frozenset[int]:
    """A package SubgroupSet as a frozenset of element ids."""
    return frozenset(int(i) for i in S.ids)


def manifest_upto(max_order: int) -> list[str]:
    """Catalog specs whose groups have order <= max_order."""
    return [s for s in MANIFEST if grp(s).order() <= max_order]


@pytest.fixture(scope="session")
def m11():
    G = construct("M11")
    lattice(G).maximal_subgroups()
    return G
