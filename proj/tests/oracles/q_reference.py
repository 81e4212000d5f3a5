"""Independent reference values for the Q construction (scipy adaptive quadrature).

Output is pasted into tests/frozen_values.hpp.
"""
import math

from scipy import integrate, optimize, stats


def params(opt):
    r = math.sqrt(opt)
    q3 = 2.0 / 3.0 * r * (1.0 - opt)
    q4 = (1.0 - opt - 2.0 * r - q3) / math.pi
    return dict(opt=opt, q3=q3, q4=q4, e1=math.sqrt(opt / 2.0), w2=r, e3=math.sqrt(q3 / 2.0))


def logloss(z):
    return -z + math.log1p(math.exp(z)) if z < -30 else math.log1p(math.exp(-z))


def risk(opt, w, loss=logloss):
    p = params(opt)
    c = math.sqrt(2.0) / 2.0
    kw = dict(epsabs=1e-13, epsrel=1e-12)
    tot = 0.0

    def box(cx, cy, h, lab, dens=1.0):
        f = lambda y, x: dens * loss(lab * (w[0] * x + w[1] * y))
        return integrate.dblquad(f, cx - h, cx + h, cy - h, cy + h, **kw)[0]

    tot += box(c, -c, p["e1"] / 2, -1) + box(-c, c, p["e1"] / 2, +1)
    f = lambda y, x: loss(w[0] * x + w[1] * y)
    tot += integrate.dblquad(f, 0, p["w2"], 0, 1, **kw)[0]
    g = lambda y, x: loss(-(w[0] * x + w[1] * y))
    tot += integrate.dblquad(g, -p["w2"], 0, -1, 0, **kw)[0]
    tot += box(1, 0, p["e3"] / 2, +1) + box(-1, 0, p["e3"] / 2, -1)
    # disk in polar coordinates, split at the label boundary theta = +-pi/2
    th = math.atan2(w[1], w[0])
    for lo, hi in ((-math.pi / 2, math.pi / 2), (math.pi / 2, 3 * math.pi / 2)):
        lab = 1.0 if lo < 0 else -1.0
        brk = [t for t in (th + math.pi / 2, th - math.pi / 2, th + 1.5 * math.pi, th - 1.5 * math.pi) if lo < t < hi]
        pts = [lo] + sorted(brk) + [hi]
        nw = math.hypot(*w)
        for a, b in zip(pts[:-1], pts[1:]):
            h = lambda r, t: p["q4"] * r * loss(lab * nw * r * math.cos(t - th))
            tot += integrate.dblquad(h, a, b, 0, 1, **kw)[0]
    return tot


if __name__ == "__main__":
    print("t_opt(0.1) =", repr(stats.norm.ppf(0.6)))
    print("q4(0.01) =", repr(params(0.01)["q4"]))
    for w in ((30.0, 0.0), (30.0, 3.0), (5.0, -2.0)):
        print("R_log Q(0.01)", w, "=", repr(risk(0.01, w)))
    hinge = lambda z: max(-z, 0.0)
    print("R_h Q(0.01) (1,0) =", repr(risk(0.01, (1.0, 0.0), hinge)))
    print("R_h Q(1/400) (1,0) =", repr(risk(1 / 400, (1.0, 0.0), hinge)))
