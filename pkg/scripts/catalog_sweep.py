"""Print Kh, pointed and Koszul ranks for every catalog link.

    python3 scripts/catalog_sweep.py [--coeff Q]
"""

import argparse
import time

from khoszul.algebra import ZZ, Coefficients
from khoszul.catalog import catalog_ids, get_link, known_khi
from khoszul.khovanov import kh
from khoszul.koszul import pointed_koszul
from khoszul.pointed import build_pointed, pointed_homology


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--coeff", default="Z")
    args = ap.parse_args()
    c = Coefficients.parse(args.coeff)
    head = ('link', 'Kh', 'tors', 'Kh(p)', "Kh'(p)", 'Koszul', '2KHI', 'sec')
    print(f"{head[0]:<14}{head[1]:>6}{head[2]:>10}" + "".join(f"{h:>8}" for h in head[3:6]) + f"{head[6]:>6}{head[7]:>7}")
    for lid in catalog_ids():
        t = time.perf_counter()
        d = get_link(lid)
        d = d.with_markings(d.one_marking_per_component())
        H = kh(d, c)
        std = pointed_homology(build_pointed(d, "standard"), c).total_rank
        dbl = pointed_homology(build_pointed(d, "doubled"), c).total_rank
        _, _, KH = pointed_koszul(build_pointed(d))
        khi = known_khi(lid)
        tors = ",".join(map(str, H.torsion())) if c == ZZ else "-"
        print(f"{lid:<14}{H.total_rank:>6}{tors or '-':>10}{std:>8}{dbl:>8}{KH.rank:>8}"
              f"{2 * khi.khi_dim if khi else '-':>6}{time.perf_counter() - t:>7.2f}")


if __name__ == "__main__":
    main()
