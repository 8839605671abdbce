"""Shared test oracles."""

import itertools
from collections import deque


def bfs_transposition_distances(n: int) -> dict[tuple[int, ...], int]:
    """Distance of every permutation of S_n from the identity in the
    transposition Cayley graph, by breadth-first search.

    Independent oracle for the production identity T(sigma) = n - |C(sigma)|.
    """
    identity = tuple(range(n))
    transpositions = []
    for i, j in itertools.combinations(range(n), 2):
        images = list(identity)
        images[i], images[j] = j, i
        transpositions.append(tuple(images))

    dist = {identity: 0}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for tau in transpositions:
            nxt = tuple(current[tau[i]] for i in range(n))
            if nxt not in dist:
                dist[nxt] = dist[current] + 1
                queue.append(nxt)
    return dist
