#!/usr/bin/env python3
"""Sweep the environment size and splice position of the two-context model.

For each chain length the formerly gappy x-proposition is pushed through
the bivalence inference; the verdict should stay Bivalent as the chain
grows and wherever the splice sits.
"""

import argparse

from qprop import (
    build_environment_scenario,
    context_new,
    induced_bivalence,
    qubit_projector,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-env", type=int, default=4, help="largest chain length")
    args = parser.parse_args()

    sigma_sz = context_new(
        "Sigma_Sz", [qubit_projector("z", +1), qubit_projector("z", -1)]
    )
    sigma_sx = context_new(
        "Sigma_Sx", [qubit_projector("x", +1), qubit_projector("x", -1)]
    )

    print(f"{'n_env':>5} {'splice':>6} {'dim':>5} {'pre':>4} {'companion':>9} "
          f"{'conjunction':>11} status")
    for n_env in range(1, args.max_env + 1):
        for splice in range(1, n_env + 1):
            sc = build_environment_scenario(n_env, splice, [sigma_sz, sigma_sx], "z")
            prop_q = sc.factors["S"].propositions["Sigma_Sx[0]"]
            env_prop = sc.factors[f"E{splice}"].propositions[f"E{splice}z+"]
            report = induced_bivalence(sc, prop_q, env_prop)
            print(
                f"{n_env:>5} {splice:>6} {sc.dimension:>5} "
                f"{report.pre_value.rendered:>4} "
                f"{report.companion_value.rendered:>9} "
                f"{report.conjunction_value.rendered:>11} {report.post_status}"
            )


if __name__ == "__main__":
    main()
