"""
Native demo workloads, one per time decade.

- sumindex:   indexed summation over an index sequence (memory access)
- pushall:    append loop with a random draw per iteration (list growth, RNG)
- branchsum:  parity-branched nested loop counter (costly branches)
- manyallocs: outer list of inner lists whose lengths come from a reseeded RNG
"""

import random
from typing import Any, Callable, Dict, List, Sequence

SEED = 1234


def sumindex(a: Sequence[float], inds: Sequence[int]) -> float:
    total = 0.0
    for i in inds:
        total += a[i]
    return total


def pushall(a: List[Any], b: Sequence[Any], rng: random.Random) -> List[Any]:
    """Push b into a one element at a time; the draw does not affect the output."""
    for x in b:
        rng.random()
        a.append(x)
    return a


def branchsum(n: int) -> int:
    """
    Even i decrements the counter; odd i runs an inner loop over 1..n where
    even j increments and odd j decrements.
    """
    counter = 0
    for i in range(1, n + 1):
        if i % 2 == 0:
            counter -= 1
        else:
            for j in range(1, n + 1):
                if j % 2 == 0:
                    counter += 1
                else:
                    counter -= 1
    return counter


def manyallocs(n: int, seed: int = SEED) -> List[List[int]]:
    """n inner lists; the generator is reseeded before every length draw."""
    rng = random.Random()
    out = []
    for _ in range(n):
        rng.seed(seed)
        out.append([0] * rng.randint(1, n))
    return out


DEFAULT_PARAMS: Dict[str, Dict[str, int]] = {
    "sumindex": {"length": 8},
    "pushall": {"length": 64},
    "branchsum": {"n": 48},
    "manyallocs": {"n": 300},
}


def make_workload(name: str, params: Dict[str, Any]) -> Callable[[], Any]:
    """
    Zero-argument closure for one builtin with its inputs prepared up front.
    
    Each closure returns a small value derived from the workload's output.
    """
    merged = {**DEFAULT_PARAMS.get(name, {}), **(params or {})}

    if name == "sumindex":
        length = int(merged["length"])
        a = [1.0] * length
        inds = list(range(length))
        random.Random(merged.get("seed", SEED)).shuffle(inds)
        return lambda: sumindex(a, inds)

    if name == "pushall":
        b = list(range(int(merged["length"])))
        rng = random.Random(merged.get("seed", SEED))
        return lambda: len(pushall([], b, rng))

    if name == "branchsum":
        n = int(merged["n"])
        return lambda: branchsum(n)

    if name == "manyallocs":
        n = int(merged["n"])
        seed = int(merged.get("seed", SEED))

        def run():
            out = manyallocs(n, seed)
            return len(out), len(out[-1])

        return run

    raise KeyError(name)
