"""Deterministic instance generators.

`gen_lower_bound` builds the two-variant adversarial family on four
degree-1 nodes: two batches of sqrt(L) transfers released together,
then a stream of L transfers that conflicts with exactly one batch.
The variants are indistinguishable until the stream starts, which is
what forces any deterministic policy to do badly on one of them.

`gen_random` draws a seeded instance with uniform endpoints, sizes,
releases, and weights. Same seed, same instance, byte for byte.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .model import Instance, Node, Request

_ONE = Fraction(1)


def gen_lower_bound(L: int, variant: str) -> Instance:
    """Adversarial pair: batches (v1,v2) and (v3,v2) at release 1, then a
    stream on (v3,v4) for variant t1 or (v1,v4) for variant t2."""
    root = math.isqrt(L)
    if root * root != L or L < 4:
        raise ValueError(f"L must be a perfect square >= 4, got {L}")
    if variant not in ("t1", "t2"):
        raise ValueError(f"variant must be 't1' or 't2', got {variant!r}")
    nodes = tuple(Node(id=f"v{k}", degree_bound=1) for k in range(1, 5))
    requests: list[Request] = []

    def add(src: str, dst: str, release: int) -> None:
        requests.append(
            Request(
                id=len(requests),
                src=src,
                dst=dst,
                size=1,
                release=release,
                weight=_ONE,
            )
        )

    for _ in range(root):
        add("v1", "v2", 1)
    for _ in range(root):
        add("v3", "v2", 1)
    stream_src = "v3" if variant == "t1" else "v1"
    for i in range(1, L + 1):
        add(stream_src, "v4", root + i)
    return Instance(nodes=nodes, requests=tuple(requests))


def gen_random(
    n_nodes: int,
    degree_max: int,
    n_jobs: int,
    size_max: int,
    weight_max: int,
    release_window: int,
    seed: int,
) -> Instance:
    """Seeded uniform instance on nodes v1..v{n_nodes}.

    Degrees are uniform in [1, degree_max], endpoints distinct uniform
    ordered pairs, sizes in [1, size_max], releases in [0,
    release_window), integer weights in [1, weight_max].
    """
    if n_nodes < 2:
        raise ValueError("need at least 2 nodes")
    for name, value in (
        ("degree_max", degree_max),
        ("n_jobs", n_jobs),
        ("size_max", size_max),
        ("weight_max", weight_max),
        ("release_window", release_window),
    ):
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")
    rng = random.Random(seed)
    nodes = tuple(
        Node(id=f"v{k}", degree_bound=rng.randint(1, degree_max))
        for k in range(1, n_nodes + 1)
    )
    requests = []
    for job_id in range(n_jobs):
        src = rng.randrange(n_nodes)
        dst = rng.randrange(n_nodes - 1)
        if dst >= src:
            dst += 1
        requests.append(
            Request(
                id=job_id,
                src=nodes[src].id,
                dst=nodes[dst].id,
                size=rng.randint(1, size_max),
                release=rng.randrange(release_window),
                weight=Fraction(rng.randint(1, weight_max)),
            )
        )
    return Instance(nodes=nodes, requests=tuple(requests))
