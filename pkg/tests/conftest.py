"""Shared corpora: randomized rational instances and an exhaustive enumeration.

All randomness is seeded, so every run sees the same corpus.  The rational
corpus is biased to hit both non-factorial rationality cases in bulk; the
enumeration corpus walks every adjusted block multiset with at most four
blocks, block size at most 2 and exponents at most 5.
"""

import itertools
import random

import pytest

from tricl.classgroup import class_group_formula
from tricl.variety import RationalityKind, TrinomialVariety, adjust, rationality_class

CORPUS_SIZE = 520
MIN_PER_CASE = 120


def _random_block(rng, max_n=3, max_l=8):
    return tuple(rng.randint(1, max_l) for _ in range(rng.randint(1, max_n)))


def _block_with_gcd(rng, target, max_n=3, max_l=8):
    """A block whose gcd is exactly `target` (first entry equals it)."""
    size = rng.randint(1, max_n)
    entries = [target]
    for _ in range(size - 1):
        multiplier = rng.randint(1, max(max_l // target, 1))
        entries.append(target * multiplier)
    rng.shuffle(entries)
    return tuple(entries)


_COPRIME_HALVES = [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 3), (2, 3, 1), (3, 1, 2)]


def _candidate(rng, mode):
    r = rng.randint(2, 4)
    m = rng.randint(0, 2)
    if mode == "free":
        blocks = [_random_block(rng) for _ in range(r + 1)]
    elif mode == "ii":
        c = rng.choice([2, 3, 4])
        blocks = [
            _block_with_gcd(rng, c * rng.randint(1, 8 // c)),
            _block_with_gcd(rng, c * rng.randint(1, 8 // c)),
        ]
        blocks += [_random_block(rng, max_l=7) for _ in range(r - 1)]
    else:  # aim for the all-pairwise-gcd-2 case
        halves = rng.choice(_COPRIME_HALVES)
        blocks = [_block_with_gcd(rng, 2 * h) for h in halves]
        blocks += [_block_with_gcd(rng, rng.choice([1, 3, 5, 7])) for _ in range(r - 2)]
    rng.shuffle(blocks)
    return TrinomialVariety(blocks, m)


@pytest.fixture(scope="session")
def rational_corpus():
    """>= 520 adjusted rational non-factorial varieties, both cases well fed."""
    rng = random.Random(20260809)
    by_case = {RationalityKind.CASE_II: [], RationalityKind.CASE_III: []}
    total = 0
    modes = itertools.cycle(["free", "ii", "iii", "ii", "iii"])
    attempts = 0
    while total < CORPUS_SIZE or any(len(v) < MIN_PER_CASE for v in by_case.values()):
        attempts += 1
        assert attempts < 100_000, "corpus generation did not converge"
        candidate = _candidate(rng, next(modes))
        adjusted, record = adjust(candidate)
        if record.degenerate:
            continue
        kind = rationality_class(adjusted)
        if kind.kind in by_case:
            by_case[kind.kind].append(adjusted)
            total += 1
    return by_case[RationalityKind.CASE_II] + by_case[RationalityKind.CASE_III]


@pytest.fixture(scope="session")
def hyperplatonic_corpus():
    """Randomized hyperplatonic varieties covering every label family."""
    rng = random.Random(97)
    corpus = []
    for _ in range(150):
        shape = rng.choice(["ade", "ade", "a_type", "a_type", "smooth"])
        if shape == "ade":
            triple = rng.choice([(5, 3, 2), (4, 3, 2), (3, 3, 2)])
        elif shape == "a_type":
            triple = (rng.randint(2, 8), 2, 2)
        else:
            x = rng.randint(1, 6)
            triple = (x, rng.randint(1, x), 1)
        blocks = [_block_with_gcd(rng, g, max_l=max(g, 4)) for g in triple]
        for _ in range(rng.randint(0, 2)):
            blocks.append(rng.choice([(1, 1), (2, 3), (1, 1, 2), (3, 4)]))
        rng.shuffle(blocks)
        corpus.append(adjust(TrinomialVariety(blocks, rng.randint(0, 2)))[0])
    return corpus


BLOCK_CHOICES = [(a,) for a in range(1, 6)] + [
    (a, b) for a in range(1, 6) for b in range(1, 6)
]


@pytest.fixture(scope="session")
def enumeration_corpus():
    """Every adjusted variety with <= 4 blocks, n_i <= 2, exponents <= 5.

    Enumerates block multisets (order is adjustment gauge) and returns pairs
    (adjusted variety, class group or the not-finitely-generated marker).
    """
    seen = {}
    for count in (3, 4):
        for combo in itertools.combinations_with_replacement(BLOCK_CHOICES, count):
            adjusted, _ = adjust(TrinomialVariety(combo))
            if adjusted.blocks in seen:
                continue
            seen[adjusted.blocks] = (adjusted, class_group_formula(adjusted))
    return list(seen.values())
