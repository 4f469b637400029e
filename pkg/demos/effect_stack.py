"""Building trees by hand over a stack of effects.

No language here: trees are written with the smart triggers of
:mod:`hitrees.stdlib` and run with the default handlers.
"""

from __future__ import annotations

from hitrees import stdlib as ops
from hitrees.effects import fix_effect, resolve_witness, sum_chain
from hitrees.evaluate import default_handler, evaluate
from hitrees.explore import ExploreBounds, explore
from hitrees.outcome import describe
from hitrees.state import HandlerState
from hitrees.tree import bind, fmap, pure

STATE = ops.state_effect("int")
DEMONIC = ops.demonic_effect("int")

# Recursion and concurrency take trees of the whole stack as arguments, so
# the stack is a fixpoint.
STACK, _ = fix_effect("Demo", lambda e: sum_chain(
    STATE, ops.rec_effect("int", "int", e), ops.conc_effect("int", e), ops.fail_effect(), DEMONIC))
REC = ops.rec_effect("int", "int", STACK)
CONC = ops.conc_effect("int", STACK)

w_state = resolve_witness(STATE, STACK)
w_rec = resolve_witness(REC, STACK)
w_conc = resolve_witness(CONC, STACK)
w_fail = resolve_witness(ops.fail_effect(), STACK)
w_demonic = resolve_witness(DEMONIC, STACK)
print("conc sits at", ".".join(w_conc.path))

# Factorial through the recursion effect.
fact = ops.rec(w_rec, lambda self: lambda n: pure(1) if n == 0 else fmap(self(n - 1), lambda r: n * r))
print("fact 5 =", describe(evaluate(fact(5), STACK)[0]))


# Each worker picks a positive even number and stores it; picking 4 fails.
def worker(tag: int):
    pick = ops.choose(w_demonic, lambda n: n % 2 == 0 and n > 0)

    def store(n):
        if n == 4:
            return ops.fail(w_fail, f"worker {tag} picked 4")
        return bind(ops.set_(w_state, n), lambda _: ops.kill(w_conc, n))

    return bind(pick, store)


prog = ops.par(w_conc, worker(1), worker(2))
outcome, _ = evaluate(prog, STACK, HandlerState(heap=0))
print("deterministic run:", describe(outcome))

bounds = ExploreBounds(demonic_enumerators={DEMONIC: range(6)})
result = explore(prog, STACK, HandlerState(heap=0), bounds)
for o in sorted(result.outcomes, key=describe):
    print("  possible:", describe(o))
