"""Survey Koszul rank against Kh rank on random braid closures.

Any link satisfies rank H(K(X, Kh)) <= 2^m rank Kh; the script records the
ratio, which is the room left for the KHI lower bound.

    python3 scripts/rank_survey.py --count 50 --seed 1 --max-crossings 6
"""

import argparse
import random
from collections import Counter

from khoszul.khovanov import kh
from khoszul.koszul import pointed_koszul
from khoszul.link import parse_braid
from khoszul.pointed import build_pointed


def random_braid(rng, max_crossings):
    k = rng.randint(2, 4)
    word = [rng.choice([1, -1]) * rng.randint(1, k - 1) for _ in range(rng.randint(1, max_crossings))]
    return parse_braid(word, k), word, k


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-crossings", type=int, default=6)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    by_m = Counter()
    for _ in range(args.count):
        d, word, k = random_braid(rng, args.max_crossings)
        d = d.with_markings(d.one_marking_per_component())
        rk = kh(d).total_rank
        _, _, KH = pointed_koszul(build_pointed(d))
        assert KH.rank <= 2 ** d.m * rk
        by_m[d.m] += 1
        print(f"m={d.m} strands={k} word={word} Kh={rk} Koszul={KH.rank} torsion={KH.total.torsion}")
    print("components:", dict(sorted(by_m.items())))


if __name__ == "__main__":
    main()
