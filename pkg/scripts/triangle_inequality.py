"""Count triangle-inequality violations of the renormalized word distance.

Violations are checked in exact rationals, so float rounding cannot create
or hide one.

    python3 scripts/triangle_inequality.py --triples 1000000 --alphabet ab
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from glotto.edit_distance import levenshtein


@dataclass(frozen=True)
class TriangleConfig:
    triples: int = 100_000
    alphabet: str = "ab"
    max_len: int = 4
    seed: int = 0


def exact_distance(a: str, b: str) -> Fraction:
    longest = max(len(a), len(b))
    return Fraction(levenshtein(a, b), longest) if longest else Fraction(0)


def run(config: TriangleConfig) -> tuple[int, list[tuple[str, str, str]]]:
    rng = np.random.default_rng(config.seed)
    letters = list(config.alphabet)

    def word() -> str:
        return "".join(rng.choice(letters, size=int(rng.integers(0, config.max_len + 1))))

    examples = []
    count = 0
    for _ in range(config.triples):
        x, y, z = word(), word(), word()
        if exact_distance(x, z) > exact_distance(x, y) + exact_distance(y, z):
            count += 1
            if len(examples) < 10:
                examples.append((x, y, z))
    return count, examples


def main() -> None:
    base = TriangleConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--triples", type=int, default=base.triples)
    p.add_argument("--alphabet", default=base.alphabet)
    p.add_argument("--max-len", type=int, default=base.max_len)
    p.add_argument("--seed", type=int, default=base.seed)
    args = p.parse_args()
    config = TriangleConfig(args.triples, args.alphabet, args.max_len, args.seed)
    count, examples = run(config)
    print(f"violations: {count} of {config.triples} triples")
    for x, y, z in examples:
        print(f"  d({x!r},{z!r}) = {exact_distance(x, z)} > "
              f"{exact_distance(x, y)} + {exact_distance(y, z)} via {y!r}")


if __name__ == "__main__":
    main()
