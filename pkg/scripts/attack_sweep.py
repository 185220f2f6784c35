#!/usr/bin/env python3
"""Coalition sweep against one verifier: how the key space collapses.

For growing coalitions on the [6,3] instance the script reports the
number of master keys consistent with everything the coalition holds,
then tries the deterministic substitution and, below the threshold,
measures the guessing success rate.  The exact label histogram is shown
on the small q=2, l=2 instance where the whole key space fits in a loop.
"""

import argparse

from subtag.adversary import (
    CoalitionView,
    assemble_system,
    count_consistent_keys,
    deterministic_forge,
    guess_forge,
    label_distribution,
)
from subtag.codes import rs_code
from subtag.errors import NotQualified
from subtag.fields import BaseField, ExtField
from subtag.rng import derive_seed
from subtag.scheme import PublicParams, distribute, keygen, tag_basis, verify


def sweep(seed: int, trials: int) -> None:
    base = BaseField(5)
    ext = ExtField(base, 3)
    pp = PublicParams(base=base, ext=ext, n=2, M=2, code=rs_code(ext, list(range(6)), 3))
    mk = keygen(pp, seed)
    vks = distribute(pp, mk)
    packets = tag_basis(pp, mk, ((1, 0, 0), (0, 1, 0)))
    target = 6
    payload = (0, 0, 1)  # outside the observed payload space

    print(f"[{pp.V},{pp.kdim}] code over GF({ext.order}), target verifier {target}")
    print(f"{'coalition':<12} {'consistent keys':>16} {'substitution':>14} {'guess rate':>12}")
    for size in range(0, 5):
        members = tuple(range(1, size + 1))
        view = CoalitionView.build(pp, {i: vks[i - 1] for i in members}, packets)
        counts = count_consistent_keys(assemble_system(view))
        try:
            pkt = deterministic_forge(view, target, payload)
            outcome = "forged" if verify(pp, vks[target - 1], pkt) else "rejected?!"
        except NotQualified:
            outcome = "not qualified"
        rate = ""
        if outcome == "not qualified":
            hits = 0
            for k in range(trials):
                pkt = guess_forge(view, target, payload, derive_seed(seed, f"sweep/{size}/{k}"))
                if verify(pp, vks[target - 1], pkt):
                    hits += 1
            rate = f"{hits}/{trials}"
        print(f"{str(members):<12} {counts.measured:>16} {outcome:>14} {rate:>12}")
    print(f"(blind guess succeeds with probability 1/{ext.order})\n")


def exact_histogram(seed: int) -> None:
    base = BaseField(2)
    ext = ExtField(base, 2)
    pp = PublicParams(base=base, ext=ext, n=1, M=1, code=rs_code(ext, [0, 1, 2], 2))
    mk = keygen(pp, seed)
    vks = distribute(pp, mk)
    packets = tag_basis(pp, mk, ((1, 0),))

    print("exact label histograms on the [3,2] instance over GF(4), target 3:")
    for members in ((1,), (1, 2)):
        view = CoalitionView.build(pp, {i: vks[i - 1] for i in members}, packets)
        hist = label_distribution(view, 3, (0, 1))
        pretty = {e.index: c for e, c in sorted(hist.items(), key=lambda kv: kv[0].index)}
        shape = "uniform" if len(set(hist.values())) == 1 and len(hist) == ext.order else "point mass"
        print(f"  coalition {members}: {pretty}  <- {shape}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2)
    ap.add_argument("--trials", type=int, default=2000)
    args = ap.parse_args()
    sweep(args.seed, args.trials)
    exact_histogram(args.seed)


if __name__ == "__main__":
    main()
