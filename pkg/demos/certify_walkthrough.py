"""Walkthrough: turning observed sign patterns into forever-certificates.

A finite simulation can only ever show a pattern holding "so far".  The
certificates close the gap: if the signs hold across a window calibrated by
a continued-fraction denominator q of the rotation number, and every
ambiguity on the window strictly clears 20*L/q (L a Lipschitz bound for the
ambiguity as a function of the rotation phase), then the pattern is forced
for all time.

Part 1 certifies a constant-sign orbit the classic way; part 2 certifies a
genuinely periodic pattern (period 14) by running the same argument along
each of the 14 arithmetic subsequences; part 3 shows the honest failure
mode: a period-874 orbit whose certificate window would need ~5e7 terms.

    python demos/certify_walkthrough.py
"""

from signorbit import (
    Params,
    certify_constant,
    certify_periodic,
    convergents,
    detect_sign_period,
    lipschitz_bound_constant,
    min_ambiguity,
    parse_complex,
    parse_real,
    run_orbit,
)


def part1_constant_sign():
    print("=" * 72)
    print("Part 1: constant-sign certificate for alpha = 1/sqrt(6), "
          "z = -1/2 - i")
    alpha = parse_real("1/sqrt(6)")
    orbit = run_orbit(Params(alpha=alpha, z_init=parse_complex("-1/2-i"),
                             horizon=10_000))
    print(f"  convergent denominators of alpha: "
          f"{convergents(alpha, 30_000).denominators()}")
    bound = lipschitz_bound_constant(alpha)
    print(f"  Lipschitz bound L = {bound:.4f}")
    for q in (485, 4801):
        cert = certify_constant(orbit, k=100, q_denominator=q)
        print(f"  window q = {q}: threshold 20L/q = {cert.threshold:.4f}, "
              f"observed min ambiguity = {cert.observed_min:.4f} "
              f"-> {cert.verdict}")
    print("  the q = 4801 certificate proves the sign stays +1 forever.\n")


def part2_periodic():
    print("=" * 72)
    print("Part 2: periodic certificate for alpha = sqrt(2)/3, z = 1 - i")
    alpha = parse_real("sqrt(2)/3")
    orbit = run_orbit(Params(alpha=alpha, z_init=parse_complex("1-i"),
                             horizon=560_000))
    hyp = detect_sign_period(orbit.signs, p_max=100)
    print(f"  detected hypothesis: p = {hyp.p} from k = {hyp.k}")
    cert = certify_periodic(orbit, hyp, eta=0.1)
    print(f"  subsampled rotation number beta = frac(p*alpha) = {cert.beta!r}")
    print(f"  chosen convergent denominator Q = {cert.convergent[1]}")
    print(f"  window: indices {cert.window[0]}..{cert.window[1]}")
    print(f"  worst residue threshold = {cert.threshold:.5f}, "
          f"worst observed min = {cert.observed_min:.5f}")
    print(f"  -> {cert.verdict}: the 14-periodic pattern persists forever.\n")


def part3_insufficient():
    print("=" * 72)
    print("Part 3: the period-874 example cannot be certified at desk scale")
    orbit = run_orbit(Params(alpha=0.5010866,
                             z_init=parse_complex("0.747467+0.445271*i"),
                             horizon=100_000))
    hyp = detect_sign_period(orbit.signs, p_max=5000)
    print(f"  detected p = {hyp.p}, min ambiguity "
          f"{min_ambiguity(orbit, 0):.2e} over 1e5 terms")
    cert = certify_periodic(orbit, hyp, eta=1e-2)
    print(f"  certificate at eta = 1e-2: {cert.verdict}")
    print(f"  reason: {cert.reason}")
    print(f"  required horizon: {cert.required_horizon:,} terms")
    print("  (and eta would still have to drop below the ambiguity floor "
          "~6.6e-6, pushing the window into the billions)")


if __name__ == "__main__":
    part1_constant_sign()
    part2_periodic()
    part3_insufficient()
