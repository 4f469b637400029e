"""A lost update, and how fetch-and-add avoids it.

Two threads increment a shared cell.  With a separate load and store both
threads can read 0, so the final value is 1 or 2.  ``FAA`` reads and
writes in one step and always ends with 2.
"""

from __future__ import annotations

from hitrees.lang import corpus, explore_program, run_program, show_value
from hitrees.outcome import describe

for name in ("race", "faa_par"):
    e = corpus.load(name)
    outcome, _ = run_program(e)
    result = explore_program(e)
    values = sorted(show_value(v) for v in result.values())
    print(corpus.source(name).splitlines()[-1])
    print(f"  round-robin run: {describe(outcome, show_value)}")
    print(f"  every schedule:  {{{', '.join(values)}}}  (exhausted = {result.exhausted})")
    for o, trace in result.outcomes.items():
        notes = ", ".join(c.note for c in trace)
        print(f"    {describe(o, show_value)} after choices: {notes}")
