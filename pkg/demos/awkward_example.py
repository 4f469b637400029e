"""Breaking the very awkward example, two ways.

``awk`` allocates a cell ``x`` and returns a function that sets ``x`` to 0,
calls its argument, sets ``x`` to 1, calls its argument again and asserts
that ``x`` is 1.  With plain function calls the assertion always holds.

Run with ``python3 demos/awkward_example.py``.
"""

from __future__ import annotations

from hitrees.explore import exists_outcome
from hitrees.lang import corpus, explore_program, run_program, show_value
from hitrees.outcome import Failure, describe


def main() -> None:
    print(corpus.source("awk"))

    # call/cc: re-entering the first call of g resets x after it was set to 1.
    outcome, _ = run_program(corpus.load("c_callcc"))
    print("c_callcc, deterministic run:", describe(outcome, show_value))

    # Concurrency: the round-robin run happens to be safe...
    c_conc = corpus.load("c_conc")
    outcome, _ = run_program(c_conc)
    print("c_conc, deterministic run:  ", describe(outcome, show_value))

    # ...but some schedule is not.  Breadth-first search reports the shortest.
    result = explore_program(c_conc)
    found, trace = exists_outcome(result, lambda o: isinstance(o, Failure))
    print(f"c_conc, all schedules: failure reachable = {found} "
          f"({result.expanded} configurations, exhausted = {result.exhausted})")
    for choice in trace:
        print(f"  step {choice.step:3}: {choice.note}")


if __name__ == "__main__":
    main()
