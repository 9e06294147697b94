"""Independent reference values for the spectrum, particle and FFT tests.

Uses scipy quadrature and root finding only; nothing here shares code with the
C++ implementation. Run: python3 tests/oracles/spectrum_oracle.py
"""
import math

import numpy as np
from scipy import integrate, optimize, special

G = 9.81


def params(u10, fetch, g=G):
    alpha = 0.076 * (u10 * u10 / (fetch * g)) ** 0.22
    wp = 22.0 * (g * g / (u10 * fetch)) ** (1.0 / 3.0)
    gamma = 7.0 * (g * fetch / (u10 * u10)) ** -0.142
    return alpha, wp, gamma


def s_j(w, u10=5.0, fetch=1e4, g=G):
    alpha, wp, gamma = params(u10, fetch, g)
    sigma = 0.07 if w <= wp else 0.09
    r = math.exp(-((w - wp) ** 2) / (2 * sigma**2 * wp**2))
    return alpha * g * g * w**-5 * math.exp(-1.25 * (wp / w) ** 4) * gamma**r


def spread(w, theta, u10=5.0, fetch=1e4):
    _, wp, _ = params(u10, fetch)
    mu = 5.0 if w <= wp else -2.5
    s = 16.0 * (w / wp) ** mu
    norm = math.exp(special.gammaln(s + 1) - special.gammaln(s + 0.5)) / (2 * math.sqrt(math.pi))
    return norm * abs(math.cos(theta / 2)) ** (2 * s)


def band_energy(u10, fetch=1e4):
    _, wp, _ = params(u10, fetch)
    val, _ = integrate.quad(lambda w: s_j(w, u10, fetch), 0.5 * wp, 2.5 * wp, points=[wp], limit=400, epsabs=0, epsrel=1e-12)
    return val


def bucket_edges(n, u10=5.0, fetch=1e4):
    _, wp, _ = params(u10, fetch)
    total = band_energy(u10, fetch)
    edges = [0.5 * wp]
    for k in range(1, n):
        target = total * k / n
        f = lambda x: integrate.quad(lambda w: s_j(w, u10, fetch), 0.5 * wp, x, points=[wp] if x > wp else None, limit=400, epsrel=1e-12)[0] - target
        edges.append(optimize.brentq(f, 0.5 * wp, 2.5 * wp, xtol=1e-14))
    edges.append(2.5 * wp)
    return edges


def groups_square(w, L=100.0, dt=1 / 60, g=G):
    return 8 * L * dt * w**3 / (math.pi**3 * g)


def fft_tile_variance(n=256, size=500.0, u10=5.0, fetch=1e4, g=G):
    dk = 2 * math.pi / size
    m = np.fft.fftfreq(n, 1.0 / n)
    total = 0.0
    for my in m:
        for mx in m:
            if abs(mx) == n // 2 or abs(my) == n // 2 or (mx == 0 and my == 0):
                continue
            kx, ky = mx * dk, my * dk
            k = math.hypot(kx, ky)
            w = math.sqrt(g * k)
            dwdk = 0.5 * math.sqrt(g / k)
            total += s_j(w, u10, fetch, g) * spread(w, math.atan2(ky, kx), u10, fetch) * dwdk / k * dk * dk
    return total


if __name__ == "__main__":
    a, wp, gm = params(5.0, 1e4)
    print(f"alpha={a:.17g} omega_p={wp:.17g} gamma={gm:.17g}")
    print(f"S_J(2.737)={s_j(2.737):.17g}")
    print(f"S_J(omega_p)={s_j(wp):.17g}")
    for u in (3.0, 5.0, 10.0, 15.0):
        print(f"band_energy(u10={u})={band_energy(u):.17g}")
    e = bucket_edges(10)
    widths = np.diff(e)
    print("edges10=", ",".join(f"{x:.12g}" for x in e))
    print("narrowest bucket", int(np.argmin(widths)), "straddles omega_p:", e[np.argmin(widths)] <= wp <= e[np.argmin(widths) + 1])
    print(f"groups(2.737)={groups_square(2.737):.17g} groups(6.843)={groups_square(6.843):.17g}")
    print(f"speed(2.737)={G / 2.737:.17g}")
    # Bucket edges for the default (16,16) table.
    e16 = bucket_edges(16)
    print("edges16=", ",".join(f"{x:.12g}" for x in e16))
    print(f"fft_tile_variance={fft_tile_variance():.17g}")
