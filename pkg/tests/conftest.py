"""Shared builders for hand-sized test instances."""

from __future__ import annotations

from fractions import Fraction

from toposched import Instance, Node, Request


def make_instance(nodes, jobs) -> Instance:
    """Build an Instance from terse tuples.

    `nodes` is a list of (id, degree_bound); `jobs` a list of
    (src, dst, size, release, weight) assigned ids 0..n-1 in order.
    """
    return Instance(
        nodes=tuple(Node(id=i, degree_bound=d) for i, d in nodes),
        requests=tuple(
            Request(
                id=k, src=s, dst=d, size=sz, release=r, weight=Fraction(w)
            )
            for k, (s, d, sz, r, w) in enumerate(jobs)
        ),
    )


def unit_line(n_nodes: int, jobs) -> Instance:
    """Degree-1 nodes v1..vn with unit-size unit-weight jobs.

    `jobs` is a list of (src, dst, release).
    """
    return make_instance(
        [(f"v{k}", 1) for k in range(1, n_nodes + 1)],
        [(s, d, 1, r, 1) for s, d, r in jobs],
    )
