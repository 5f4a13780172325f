import numpy as np


def equal_up_to_phase(a, b, atol=1e-10):
    """Max-entry distance after aligning the global phase of ``b`` to ``a``."""
    a, b = np.asarray(a), np.asarray(b)
    k = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    if abs(b[k]) < 1e-12:
        return False
    phase = a[k] / b[k]
    phase /= abs(phase)
    return np.abs(a - phase * b).max() <= atol


def same_branch_states(p, q, psi=None, binding=None, tol=1e-9):
    """True if ``p`` and ``q`` produce the same multiset of branch states.

    Signal shifting relabels outcomes, so branches are matched as a
    multiset rather than by outcome string.
    """
    from mbqspat.sim import branch_states, fidelity

    a = [s for _, s in branch_states(p, psi, binding)]
    b = [s for _, s in branch_states(q, psi, binding)]
    if len(a) != len(b):
        return False
    for s in a:
        for k, t in enumerate(b):
            if fidelity(s, t) > 1 - tol:
                del b[k]
                break
        else:
            return False
    return True


def j_chain(angles):
    """Unstandardized chain of one-node steps ``N E M X``, one per angle."""
    from mbqspat.angle import AngleExpr
    from mbqspat.pattern import E, M, N, Pattern, X

    cmds = []
    for i, a in enumerate(angles):
        cmds += [N(i + 1), E((i, i + 1)), M(i, "XY", AngleExpr.coerce(a)), X(i + 1, (i,))]
    return Pattern((0,), (len(angles),), tuple(cmds))
