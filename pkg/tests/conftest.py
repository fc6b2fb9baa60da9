import random
from fractions import Fraction

import pytest

from desir.spaces import Gamble, HorseLottery, Space


@pytest.fixture
def rng():
    return random.Random(20240811)


def rand_rat(rng, lo=-4, hi=4, max_den=4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def rand_nonneg_rat(rng, hi=4, max_den=4) -> Fraction:
    return Fraction(rng.randint(0, hi), rng.randint(1, max_den))


def rand_space(rng, max_states=3, max_prizes=3, worst=True) -> Space:
    n = rng.randint(1, max_states)
    m = rng.randint(1, max_prizes)
    return Space(
        tuple(f"w{i}" for i in range(n)),
        tuple(f"x{j}" for j in range(m)),
        "z" if worst else None,
    )


def rand_gamble(rng, space, lo=-4, hi=4, max_den=4) -> Gamble:
    return Gamble.of(
        space,
        [[rand_rat(rng, lo, hi, max_den) for _ in space.prizes] for _ in space.omega],
    )


def rand_mass_row(rng, width) -> tuple:
    raw = [rng.randint(0, 5) for _ in range(width)]
    if not any(raw):
        raw[rng.randrange(width)] = 1
    total = sum(raw)
    return tuple(Fraction(v, total) for v in raw)


def rand_lottery(rng, space, includes_worst=True) -> HorseLottery:
    width = space.n_prizes + (1 if includes_worst else 0)
    rows = [rand_mass_row(rng, width) for _ in space.omega]
    return HorseLottery.of(space, rows, includes_worst)
