"""Tables of distances and discontinuity counts for the example sequences.

Prints one CSV block per family so the output can be pasted into a notebook.
"""
import argparse
from fractions import Fraction

from circleflow.flows import cauchy46, dyadic63, example41, example62
from circleflow.metric import d
from circleflow.pac import PacMap, sharp

ID = PacMap.identity()


def main(n_max: int, t_max: int):
    print("family,n,d_to_id,sharp")
    for n in range(1, n_max + 1):
        f = example41(n)
        print(f"halves_swapped,{n},{d(f, ID).value},{sharp(f)}")
    for n in range(1, n_max + 1):
        g = dyadic63(1, n)
        print(f"dyadic,{n},{d(g, ID).value},{sharp(g)}")
    prev = None
    for n in range(1, n_max + 1):
        f = cauchy46(n)
        step = d(prev, f).value if prev is not None else ""
        print(f"cauchy,{n},{step},{sharp(f)}")
        prev = f
    print()
    print("t,sharp_example62")
    for k in range(2, 2 * t_max, 4):
        t = Fraction(k + 1, 2)
        print(f"{t},{sharp(example62(t))}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--t-max", type=int, default=64)
    args = ap.parse_args()
    main(args.n_max, args.t_max)
