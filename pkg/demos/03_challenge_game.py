"""Run the optimistic challenge game end to end on the simulated ledger.

Three runs: an unchallenged honest solver gets paid; a spurious
challenger loses its stake to an honest solver who proves correctness;
a cheating solver is caught by the data user's authentication failure
and slashed.
"""

from poabe.harness import run_challenge_case, run_happy_case, run_self_challenge_case


def show(result):
    print(f"--- {result.name} (seed {result.seed})")
    if result.recovered is not None:
        print(f"    plaintext recovered: {result.recovered}")
    for account, delta in sorted(result.payoffs.items()):
        print(f"    {account}: {'+' if delta >= 0 else ''}{delta}")
    for note in result.notes:
        print(f"    note: {note}")


show(run_happy_case(seed=1))
show(run_challenge_case("honest", seed=2))
show(run_challenge_case("corrupt_T", seed=3))
show(run_self_challenge_case(seed=4))
print("all settlement assertions held")
