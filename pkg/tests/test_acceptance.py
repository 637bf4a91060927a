"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (run with -s to see them all) and
asserts the same condition, so the suite is green exactly when every
headline property holds at its stated tolerance.
"""
import cmath
import json
import time

import numpy as np

from kg_lab import (
    DispersionKind,
    ModeSet,
    TwoModeSpec,
    UnitSystem,
    compute_fields,
    continuity_residual,
    evolve,
    from_coefficients,
    gaussian_packet,
    group_velocity,
    kg_residual,
    make_grid,
    moments,
    omega,
    rest_phase_strip,
    superposition,
    superposition_density,
    two_mode_density_of_phase,
    two_mode_min_density,
    unphysical_negative_branch,
)
from kg_lab.cli import main
from kg_lab.scenarios import scenario_names
from kg_lab.states import PacketSpec

KG = DispersionKind.KLEIN_GORDON_POSITIVE
NR = DispersionKind.SCHRODINGER


def _report(num, label, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {num:2d} {status} {label} ({detail})")
    assert ok, f"criterion {num} {label}: {detail}"


def _random_state(rng, grid, units, kind, band=0.25):
    coeffs = np.zeros(grid.n, dtype=complex)
    top = max(2, int(band * grid.n / 2))
    idx = np.concatenate([np.arange(0, top), np.arange(grid.n - top, grid.n)])
    coeffs[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    coeffs /= np.sqrt(grid.length * np.sum(np.abs(coeffs) ** 2))
    return from_coefficients(grid, units, kind, coeffs)


def test_criterion_01_dispersion_identity():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for i in range(100):
        n = int(rng.choice([16, 32, 64, 128]))
        grid = make_grid(n, float(rng.uniform(10.0, 60.0)))
        units = UnitSystem(hbar=float(rng.uniform(0.5, 2.0)),
                           c=float(rng.uniform(0.5, 2.0)),
                           m=float(rng.uniform(0.5, 2.0)))
        kind = KG if i % 2 == 0 else unphysical_negative_branch()
        state = _random_state(rng, grid, units, kind)
        worst = max(worst, kg_residual(state, t=float(rng.uniform(0.0, 50.0))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    _report(1, "mass-shell residual on 100 random states",
            ok, f"max residual {worst:.3e}, {elapsed:.2f} s")


def test_criterion_02_plane_wave_density_ratio():
    grid = make_grid(512, 2.0 * np.pi * 64.0 / 3.0)  # puts k = 3 on the lattice
    units = UnitSystem(hbar=1.0, c=1.0, m=4.0)
    devs = {}
    for label, kind, target in (("positive", KG, 1.25),
                                ("negative", unphysical_negative_branch(), -1.25)):
        state = superposition(ModeSet([(1.0, 3.0)]), grid, units, kind)
        fields = compute_fields(evolve(state, 0.7))
        devs[label] = float(np.max(np.abs(fields.rho_kg / fields.rho_nonrel - target)))
    ok = all(d <= 1e-12 for d in devs.values())
    _report(2, "plane-wave density ratio +/-1.25 at k=3, m=4",
            ok, f"max deviation positive {devs['positive']:.2e}, "
                f"negative {devs['negative']:.2e}")


def test_criterion_03_broad_packet_density():
    units = UnitSystem(hbar=1.0, c=1.0, m=4.0)

    def masked_dev(sigma, n, length):
        grid = make_grid(n, length)
        state = gaussian_packet(PacketSpec(0.0, 3.0, sigma), grid, units, KG)
        fields = compute_fields(evolve(state, 0.0))
        mask = fields.rho_nonrel >= 1e-3 * fields.rho_nonrel.max()
        return float(np.max(np.abs(
            fields.rho_kg[mask] / (fields.gamma_bar * fields.rho_nonrel[mask]) - 1.0)))

    dev20 = masked_dev(20.0, 4096, 400.0)
    dev40 = masked_dev(40.0, 8192, 800.0)  # same dx, box rescaled for the support rule
    ok = dev20 <= 1e-3 and dev20 / dev40 >= 3.0
    _report(3, "broad-packet density tracks gamma_bar psi*psi",
            ok, f"sigma=20 deviation {dev20:.3e}, sigma=40 {dev40:.3e}, "
                f"ratio {dev20 / dev40:.2f}")


def test_criterion_04_continuity():
    start = time.perf_counter()
    units = UnitSystem(hbar=1.0, c=1.0, m=4.0)
    grid = make_grid(4096, 400.0)

    def residuals(kind, dt):
        state = gaussian_packet(PacketSpec(0.0, 3.0, 10.0), grid, units, kind)
        fields = compute_fields(evolve(state, 10.0))
        fb = compute_fields(evolve(state, 10.0 - dt))
        fa = compute_fields(evolve(state, 10.0 + dt))
        if kind is KG:
            return (
                continuity_residual(fb.rho_kg, fa.rho_kg, fields.j_std, dt, grid),
                continuity_residual(fb.rho_amended, fa.rho_amended,
                                    fields.j_amended, dt, grid),
            )
        return (
            continuity_residual(fb.rho_nonrel, fa.rho_nonrel, fields.j_std, dt, grid),
        )

    res_kg, res_amd = residuals(KG, 1e-3)
    res_kg_half, _ = residuals(KG, 5e-4)
    (res_nr,) = residuals(NR, 1e-3)
    elapsed = time.perf_counter() - start
    ok = (res_kg <= 1e-6 and res_amd <= 1e-6 and res_nr <= 1e-6
          and res_kg / res_kg_half >= 3.5 and elapsed < 5.0)
    _report(4, "continuity residual for conserved, amended, and twin pairs",
            ok, f"conserved {res_kg:.2e}, amended {res_amd:.2e}, twin {res_nr:.2e}, "
                f"halving ratio {res_kg / res_kg_half:.2f}, {elapsed:.2f} s")


def test_criterion_05_amended_reduction():
    units = UnitSystem(hbar=1.0, c=1.0, m=4.0)
    grid = make_grid(512, 2.0 * np.pi * 64.0 / 3.0)
    state = superposition(ModeSet([(1.0, 3.0)]), grid, units, KG)
    fields = compute_fields(evolve(state, 1.3))
    plane_dev = float(np.max(np.abs(fields.rho_amended - fields.rho_nonrel)))

    grid4 = make_grid(4096, 400.0)
    packet = gaussian_packet(PacketSpec(0.0, 3.0, 20.0), grid4, units, KG)
    pf = compute_fields(evolve(packet, 0.0))
    l2_ratio = float(np.linalg.norm(pf.rho_amended - pf.rho_nonrel)
                     / np.linalg.norm(pf.rho_nonrel))
    ok = plane_dev <= 1e-12 and l2_ratio <= 1e-3
    _report(5, "amended density reduces to psi*psi",
            ok, f"plane-wave max dev {plane_dev:.2e}, packet L2 ratio {l2_ratio:.2e}")


def test_criterion_06_group_velocity():
    units = UnitSystem.natural()
    grid = make_grid(4096, 400.0)
    times = np.linspace(0.0, 50.0, 6)
    slopes = {}
    for label, kind, target in (("relativistic", KG, group_velocity(KG, 1.0, units)),
                                ("twin", NR, 1.0)):
        state = gaussian_packet(PacketSpec(0.0, 1.0, 20.0), grid, units, kind)
        centroids = [moments(evolve(state, t).state.density_nonrel, grid).centroid
                     for t in times]
        slope = float(np.polyfit(times, centroids, 1)[0])
        slopes[label] = (slope, abs(slope / target - 1.0))

    ks = np.linspace(0.0, 1000.0, 4001)
    v = group_velocity(KG, ks, units)
    subluminal = bool(np.all(np.abs(v) < units.c)) and units.c - v[-1] <= 1e-6 * units.c

    ok = (slopes["relativistic"][1] <= 1e-3 and slopes["twin"][1] <= 1e-3
          and subluminal)
    _report(6, "centroid drift matches the group velocity",
            ok, f"slope {slopes['relativistic'][0]:.6f} vs 1/sqrt(2) "
                f"(rel err {slopes['relativistic'][1]:.1e}), twin rel err "
                f"{slopes['twin'][1]:.1e}, sweep subluminal {subluminal}")


def test_criterion_07_two_mode_negativity():
    units = UnitSystem.natural()
    phases = np.linspace(0.0, 2.0 * np.pi, 10_000, endpoint=False)
    amp = np.sqrt(0.5)
    equal_min = min(
        float(two_mode_density_of_phase(
            TwoModeSpec(a1=amp, a2=amp, omega1=w1, omega2=w2), units, phases).min())
        for w1, w2 in ((1.0, 5.0), (1.0, 1.5), (2.0, 7.0))
    )

    spec = TwoModeSpec(a1=np.sqrt(0.9), a2=np.sqrt(0.1), omega1=1.0, omega2=5.0)
    analytic = two_mode_min_density(spec, units)
    scan_min = float(two_mode_density_of_phase(spec, units, phases).min())

    # Lattice realization: snap each frequency to its nearest grid mode and
    # scan the resulting state's density for a negative value.
    grid = make_grid(4096, 400.0)
    ks = []
    for w in (spec.omega1, spec.omega2):
        k_raw = np.sqrt(max(0.0, (w / units.c) ** 2 - units.compton_wavenumber**2))
        index = int(round(k_raw * grid.length / (2.0 * np.pi)))
        ks.append(2.0 * np.pi * index / grid.length)
    mode_set = ModeSet([(spec.a1, ks[0]), (spec.a2, ks[1])])
    sd = superposition_density(mode_set, 0.0, grid, units)

    ok = (equal_min >= -1e-12
          and abs(analytic - (-0.4)) <= 1e-12
          and abs(scan_min - analytic) <= 1e-9
          and sd.minimum < 0.0)
    _report(7, "two-mode density negativity",
            ok, f"equal-amplitude scan min {equal_min:.2e}, analytic {analytic:.15f}, "
                f"scan gap {abs(scan_min - analytic):.2e}, grid min {sd.minimum:.4e}")


def test_criterion_08_amplitude_route_equivalence():
    rng = np.random.default_rng(108)
    units = UnitSystem.natural()
    grid = make_grid(256, 100.0)
    half = grid.n // 2
    pool = np.concatenate([np.arange(0, half), np.arange(half + 1, grid.n)])
    worst = 0.0
    for _ in range(50):
        n_modes = int(rng.integers(2, 9))
        idx = rng.choice(pool, size=n_modes, replace=False)
        amps = rng.standard_normal(n_modes) + 1j * rng.standard_normal(n_modes)
        amps /= np.linalg.norm(amps)
        ms = ModeSet(list(zip(amps, grid.wavenumbers[idx])))
        t = float(rng.uniform(0.0, 5.0))
        sd = superposition_density(ms, t, grid, units)
        result = evolve(superposition(ms, grid, units, KG), t)
        fields = compute_fields(result)
        worst = max(worst, float(np.max(np.abs(sd.rho - fields.rho_kg))))
    ok = worst <= 1e-10
    _report(8, "amplitude-space density equals the state-route density",
            ok, f"max elementwise gap over 50 mode sets {worst:.3e}")


def test_criterion_09_nonrelativistic_limit():
    grid = make_grid(4096, 400.0)
    spec = PacketSpec(0.0, 0.0, 20.0)

    def gap(c):
        units = UnitSystem(hbar=1.0, c=c, m=1.0)
        kg_state = gaussian_packet(spec, grid, units, KG)
        nr_state = gaussian_packet(spec, grid, units, NR)
        kg_t = rest_phase_strip(evolve(kg_state, 5.0).state)
        nr_t = evolve(nr_state, 5.0).state
        return float(np.linalg.norm(kg_t.values - nr_t.values) * np.sqrt(grid.dx))

    g10, g20 = gap(10.0), gap(20.0)
    ratio = g10 / g20
    ok = ratio >= 3.5
    _report(9, "rest-phase-stripped gap to the twin falls as 1/c^2",
            ok, f"gap(c=10) {g10:.3e}, gap(c=20) {g20:.3e}, ratio {ratio:.3f}")


def test_criterion_10_brute_force_oracle():
    rng = np.random.default_rng(110)
    worst = 0.0
    for n in (16, 32, 64):
        grid = make_grid(n, float(rng.uniform(15.0, 40.0)))
        units = UnitSystem(hbar=1.0, c=1.0, m=float(rng.uniform(0.5, 2.0)))
        for kind in (KG, unphysical_negative_branch(), NR):
            state = _random_state(rng, grid, units, kind, band=0.4)
            t = float(rng.uniform(0.0, 10.0))
            evolved = evolve(state, t).state
            omegas = omega(kind, grid.wavenumbers, units)
            for i in rng.integers(0, n, size=10):
                x = grid.points[i]
                direct = sum(
                    complex(c) * cmath.exp(1j * (k * x - w * t))
                    for c, k, w in zip(state.coefficients, grid.wavenumbers, omegas)
                )
                worst = max(worst, abs(evolved.values[i] - direct))
    ok = worst <= 1e-10
    _report(10, "spectral evolution equals direct mode summation",
            ok, f"max pointwise gap {worst:.3e}")


def test_criterion_11_cli_determinism(tmp_path):
    per_scenario = {}
    start_all = time.perf_counter()
    for name in scenario_names():
        cfg_path = tmp_path / f"{name}.json"
        cfg_path.write_text(json.dumps({"scenario": name}))
        out_dir = tmp_path / name
        start = time.perf_counter()
        assert main(["run", str(cfg_path), "--out", str(out_dir), "--quiet"]) == 0
        per_scenario[name] = time.perf_counter() - start
        first = {p.name: p.read_bytes() for p in out_dir.iterdir()}
        assert main(["run", str(cfg_path), "--out", str(out_dir), "--quiet"]) == 0
        second = {p.name: p.read_bytes() for p in out_dir.iterdir()}
        assert first, f"{name} wrote no files"
        if first != second:
            _report(11, "CLI determinism", False, f"{name} outputs differ between runs")
    total = time.perf_counter() - start_all
    slowest = max(per_scenario.values())
    ok = total < 60.0 and slowest < 10.0
    _report(11, "byte-identical CLI reruns across the catalog",
            ok, f"{len(per_scenario)} scenarios, catalog {total:.1f} s, "
                f"slowest {slowest:.1f} s")
