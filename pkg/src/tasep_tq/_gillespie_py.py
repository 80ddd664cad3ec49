"""Pure-Python Gillespie kernel; same contract and arithmetic as the compiled one."""

from math import inf, log


def advance(occ, alpha, beta, t, t_end, u, pos):
    """Run the open TASEP from time t until t_end or until uniforms run out.

    ``occ`` is a writable int8 buffer (index 0 = site 1) and ``u`` a buffer
    of uniforms in [0, 1), consumed two per event starting at ``pos``. When
    the next event would land past ``t_end`` the clock is clamped there and
    the waiting draw is discarded (the process is memoryless).

    Returns ``(t, pos, entries, occ1_time)``.
    """
    buf = occ
    occ = [int(v) for v in buf]
    u = u[pos:].tolist() if hasattr(u, "tolist") else list(u[pos:])
    base, pos = pos, 0
    L = len(occ)
    n = len(u)
    entries = 0
    occ1 = 0.0
    hops = 0
    for k in range(L - 1):
        if occ[k] and not occ[k + 1]:
            hops += 1
    while pos + 1 < n:
        rate = hops
        if not occ[0]:
            rate += alpha
        if occ[L - 1]:
            rate += beta
        dt = -log(1.0 - u[pos]) / rate if rate > 0 else inf
        if t + dt >= t_end:
            occ1 += occ[0] * (t_end - t)
            buf[:] = occ
            return t_end, base + pos + 1, entries, occ1
        occ1 += occ[0] * dt
        t += dt
        r = u[pos + 1] * rate
        pos += 2
        if not occ[0]:
            if r < alpha:
                occ[0] = 1
                entries += 1
                # site 1 filled: a hop 1->2 may open
                if L > 1 and not occ[1]:
                    hops += 1
                continue
            r -= alpha
        done = False
        for k in range(L - 1):
            if occ[k] and not occ[k + 1]:
                if r < 1.0:
                    occ[k] = 0
                    occ[k + 1] = 1
                    done = True
                    break
                r -= 1.0
        if done:
            # a hop only changes the two bonds touching k and k+1
            hops = 0
            for j in range(L - 1):
                if occ[j] and not occ[j + 1]:
                    hops += 1
            continue
        if occ[L - 1]:
            occ[L - 1] = 0
            if L > 1 and occ[L - 2]:
                hops += 1
            continue
        # rounding pushed r past every enabled event: take the last one
        for k in range(L - 2, -1, -1):
            if occ[k] and not occ[k + 1]:
                occ[k] = 0
                occ[k + 1] = 1
                break
        hops = 0
        for j in range(L - 1):
            if occ[j] and not occ[j + 1]:
                hops += 1
    buf[:] = occ
    return t, base + pos, entries, occ1
