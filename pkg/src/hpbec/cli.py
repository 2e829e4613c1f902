"""Command-line driver: config ingestion, experiment orchestration, and
machine-readable emission (CSV tables, JSON summaries, run manifest).

Exit codes: 0 success, 2 validation/contract failure, 3 numerical divergence,
4 verification failure (a residual ladder came back non-monotone).
"""

import argparse
import copy
import csv
import hashlib
import json
import os
import sys

import numpy as np

from . import bec_states, condensation, decoupling, phonon_gas
from .couplings import CouplingFamily
from .dispersion import quadratic_dispersion, tabulated_dispersion, validate_dispersion
from .errors import (
    BracketError,
    ContractViolation,
    InfraredDivergence,
    UnsolvableDensity,
    VerificationFailure,
)
from .hubbard import build_hubbard_system
from .lattice import build_lattice_modes
from .testfunctions import gaussian_test_function

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_VERIFICATION = 4

OUT_DIR_ENV = "HPBEC_OUT_DIR"

DEFAULT_CONFIG = {
    "dispersion": {
        "name": "quadratic",
        "omega0": 1.0,
        "mu_b": 0.0,
        "dimension": 3,
        "growth_exponent": 4.0,
        "table": None,  # optional [[k, r(k)], ...] samples
    },
    "hubbard": {
        "num_sites": 2,
        "num_electrons": 2,
        "hopping": [[0.0, -1.0], [-1.0, 0.0]],
        "repulsion": 2.0,
        "alpha": 0.2,
        "kappa": 0.5,
        "uv_width": 2.0,
    },
    "thermo": {
        "beta": 1.0,
        "temperature": None,
        "rho_target": None,  # default: 2 x critical density
        "num_internal": 1,
    },
    "sweep": {
        "box_sizes": [10.0, 20.0, 40.0],
        "level_caps": [6, 9, 12],
        "coupled_box_size": 10.0,
        "mode_coords": [[1, 0, 0], [0, 1, 0]],
    },
    "bec": {
        "test_width": 1.0,
        "test_center": [0.0, 0.0, 0.0],
        "test_amplitude": 1.0,
        "r": 1.0,
        "theta": 1.0471975511965976,
        "suite_size": 10,
    },
    "phase_grid": {"densities": [0.5, 1.0, 2.0], "betas": [0.5, 1.0, 2.0]},
    "seed": 12345,
    "output": {"directory": "hpbec-out"},
    "tolerances": {"fugacity_residual": 1e-10, "critical_band": 1e-9},
}


def fmt(x):
    """17-significant-digit float formatting for diff-able CSV output."""
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def deep_merge(base, override):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], val)
        else:
            out[key] = val
    return out


def apply_override(config, dotted, raw):
    node = config
    parts = dotted.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node[parts[-1]] = value


def load_config(path, overrides):
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        with open(path) as fh:
            config = deep_merge(config, json.load(fh))
    for item in overrides:
        key, _, raw = item.partition("=")
        if not _:
            raise ContractViolation(f"override {item!r} is not KEY=VALUE")
        apply_override(config, key, raw)
    thermo = config["thermo"]
    if (thermo.get("beta") is None) == (thermo.get("temperature") is None):
        raise ContractViolation("exactly one of thermo.beta / thermo.temperature must be set")
    if thermo.get("beta") is None:
        thermo["beta"] = 1.0 / float(thermo["temperature"])
    return config


def build_dispersion(config):
    d_cfg = config["dispersion"]
    if d_cfg.get("table"):
        table = np.asarray(d_cfg["table"], dtype=float)
        return tabulated_dispersion(
            table[:, 0],
            table[:, 1],
            dimension=int(d_cfg["dimension"]),
            growth_exponent=float(d_cfg["growth_exponent"]),
            mu_b=float(d_cfg["mu_b"]),
        )
    if d_cfg["name"] != "quadratic":
        raise ContractViolation(f"unknown dispersion {d_cfg['name']!r}")
    return quadratic_dispersion(
        omega0=float(d_cfg["omega0"]),
        mu_b=float(d_cfg["mu_b"]),
        dimension=int(d_cfg["dimension"]),
        growth_exponent=float(d_cfg["growth_exponent"]),
    )


def build_family(config):
    h = config["hubbard"]
    d = int(config["dispersion"]["dimension"])
    return CouplingFamily(int(h["num_sites"]), d, float(h["uv_width"]), float(h["kappa"]))


def build_cluster(config):
    h = config["hubbard"]
    return build_hubbard_system(
        int(h["num_sites"]),
        int(h["num_electrons"]),
        np.asarray(h["hopping"], dtype=float),
        float(h["repulsion"]),
        float(h["alpha"]),
        float(config["thermo"]["beta"]),
    )


def build_test_function(config):
    b = config["bec"]
    d = int(config["dispersion"]["dimension"])
    return gaussian_test_function(
        d, center=np.asarray(b["test_center"], dtype=float)[:d], width=float(b["test_width"]),
        amplitude=complex(b["test_amplitude"]),
    )


def resolve_density(config, disp):
    thermo = config["thermo"]
    if thermo.get("rho_target") is not None:
        return float(thermo["rho_target"])
    return 2.0 * phonon_gas.rho_crit(disp, float(thermo["beta"]), int(thermo["num_internal"]))


class Emitter:
    """Serialized artifact writer with an operation log for the manifest."""

    def __init__(self, out_dir, config, command):
        self.out_dir = out_dir
        self.config = config
        self.command = command
        self.artifacts = []
        os.makedirs(out_dir, exist_ok=True)

    def csv(self, name, header, rows):
        path = os.path.join(self.out_dir, name)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
        self.artifacts.append(name)
        return path

    def json(self, name, payload):
        path = os.path.join(self.out_dir, name)
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, default=fmt)
            fh.write("\n")
        self.artifacts.append(name)
        return path

    def manifest(self):
        digest = hashlib.sha256(
            json.dumps(self.config, sort_keys=True).encode()
        ).hexdigest()
        self.json(
            "manifest.json",
            {
                "command": self.command,
                "config_sha256": digest,
                "seed": self.config.get("seed"),
                "artifacts": sorted(self.artifacts),
            },
        )


def cmd_validate(config, emitter):
    disp = build_dispersion(config)
    report = validate_dispersion(disp, float(config["thermo"]["beta"]))
    emitter.json(
        "validate.json",
        {
            "all_passed": report.all_passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": c.witness}
                for c in report.checks
            ],
        },
    )
    if not report.all_passed:
        names = ", ".join(c.name for c in report.failed())
        print(f"dispersion validation failed: {names}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_condense(config, emitter):
    disp = build_dispersion(config)
    beta = float(config["thermo"]["beta"])
    n_i = int(config["thermo"]["num_internal"])
    rho = resolve_density(config, disp)
    seq = condensation.condensate_sequence(
        config["sweep"]["box_sizes"], rho, beta, disp, num_internal=n_i
    )
    report = condensation.classify_phase(rho, beta, disp, n_i)
    rows = [
        (L, y, res, dens, report.phase)
        for L, y, res, dens in zip(
            seq.box_sizes, seq.fugacities, seq.residuals, seq.condensate_densities
        )
    ]
    emitter.csv("condense.csv", ["L", "y_L", "residual", "N_b0_over_Ld", "phase"], rows)
    emitter.json(
        "condense.json",
        {
            "rho_target": rho,
            "rho_crit": report.critical_density,
            "phase": report.phase,
            "extrapolated_condensate_density": seq.extrapolated,
            "expected_limit": max(rho - report.critical_density, 0.0),
        },
    )
    return EXIT_OK


def cmd_phase_diagram(config, emitter):
    disp = build_dispersion(config)
    n_i = int(config["thermo"]["num_internal"])
    rows = []
    for beta in config["phase_grid"]["betas"]:
        rc = phonon_gas.rho_crit(disp, float(beta), n_i)
        for scale in config["phase_grid"]["densities"]:
            rho = float(scale) * rc
            rep = condensation.classify_phase(rho, float(beta), disp, n_i)
            rows.append(
                (beta, rho, rc, rep.phase, rep.normal_fugacity, rep.condensate_density)
            )
    emitter.csv(
        "phase_diagram.csv",
        ["beta", "rho_target", "rho_crit", "phase", "normal_fugacity", "condensate_density"],
        rows,
    )
    return EXIT_OK


def cmd_decouple_verify(config, emitter):
    disp = build_dispersion(config)
    family = build_family(config)
    cluster = build_cluster(config)
    sweep = config["sweep"]
    coords = np.asarray(sweep["mode_coords"], dtype=float)[:, : disp.dimension]
    sys_c = decoupling.build_coupled_system(
        cluster, family, disp, float(sweep["coupled_box_size"]), coords
    )
    caps = [int(c) for c in sweep["level_caps"]]
    dressing = decoupling.verify_dressing_identity(sys_c, caps)
    spectral = decoupling.verify_spectral_equivalence(sys_c, caps[-1])
    rng = np.random.default_rng(config.get("seed"))
    dim = cluster.sector.dim
    a_e = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    a_e = 0.5 * (a_e + a_e.conj().T)
    f_modes = rng.standard_normal(sys_c.num_modes) + 1j * rng.standard_normal(sys_c.num_modes)
    fact = decoupling.factorization_ladder(sys_c, caps, a_e, f_modes)
    emitter.csv(
        "decouple_ladder.csv",
        ["level_cap", "dressing_residual", "factorization_gap"],
        list(zip(caps, dressing.residuals, fact.gaps)),
    )
    emitter.json(
        "decouple.json",
        {
            "dressing_residuals": list(dressing.residuals),
            "dressing_monotone": dressing.monotone,
            "factorization_gaps": list(fact.gaps),
            "factorization_monotone": fact.monotone,
            "spectral_levels_coupled": [float(x) for x in spectral.coupled],
            "spectral_levels_decoupled": [float(x) for x in spectral.decoupled],
            "spectral_max_gap": spectral.max_gap,
        },
    )
    if not (dressing.monotone and fact.monotone):
        raise VerificationFailure("dressing/factorization residual ladder is not monotone")
    return EXIT_OK


def cmd_bec_states(config, emitter):
    disp = build_dispersion(config)
    beta = float(config["thermo"]["beta"])
    n_i = int(config["thermo"]["num_internal"])
    rho = resolve_density(config, disp)
    report = condensation.classify_phase(rho, beta, disp, n_i)
    if report.phase != "condensed":
        raise UnsolvableDensity("bec-states requires a condensed-phase target density")
    phase = bec_states.CondensatePhase(
        float(config["bec"]["r"]),
        float(config["bec"]["theta"]),
        report.condensate_density,
        disp.dimension,
        n_i,
    )
    rng = np.random.default_rng(config.get("seed"))
    rows = []
    for idx in range(int(config["bec"]["suite_size"])):
        f = gaussian_test_function(
            disp.dimension,
            center=rng.normal(scale=0.4, size=disp.dimension),
            width=float(rng.uniform(0.6, 1.6)),
            amplitude=complex(rng.normal(), rng.normal()) * 0.5,
        )
        q0 = bec_states.q_form("q0", f, disp, beta, phase=phase)
        q1 = bec_states.q_form("q1", f, disp, beta)
        gap = bec_states.decomposition_gap(f, disp, beta, phase)
        rows.append((idx, q0, q1, bec_states.psi_bec(f, disp, beta, phase), gap))
    emitter.csv(
        "bec_states.csv", ["index", "q0", "q1", "psi_bec", "decomposition_gap"], rows
    )
    emitter.json(
        "bec_states.json",
        {
            "rho_target": rho,
            "condensate_density": report.condensate_density,
            "fiber_density": bec_states.fiber_density(phase, disp, beta),
            "max_decomposition_gap": max(r[-1] for r in rows),
        },
    )
    return EXIT_OK


def cmd_fingerprint(config, emitter):
    disp = build_dispersion(config)
    beta = float(config["thermo"]["beta"])
    n_i = int(config["thermo"]["num_internal"])
    rho = resolve_density(config, disp)
    report = condensation.classify_phase(rho, beta, disp, n_i)
    if report.phase != "condensed":
        raise UnsolvableDensity("fingerprint requires a condensed-phase target density")
    base = bec_states.CondensatePhase(
        1.0, 0.0, report.condensate_density, disp.dimension, n_i
    )
    f1, f2 = bec_states.canonical_probe_pair(base.amplitude, disp.dimension)
    rng = np.random.default_rng(config.get("seed"))
    rows = []
    for idx in range(32):
        r, theta = float(rng.uniform(0.05, 4.0)), float(rng.uniform(0.0, 2.0 * np.pi))
        ph = base.with_angles(r, theta)
        rec = bec_states.fingerprint_recover(
            bec_states.e_fingerprint(ph, f1), bec_states.e_fingerprint(ph, f2)
        )
        rows.append((idx, r, theta, rec.r, rec.theta, abs(rec.r - r)))
    emitter.csv(
        "fingerprint.csv",
        ["index", "r", "theta", "recovered_r", "recovered_theta", "abs_error_r"],
        rows,
    )
    return EXIT_OK


def cmd_full_report(config, emitter):
    code = EXIT_OK
    for fn in (
        cmd_validate,
        cmd_condense,
        cmd_phase_diagram,
        cmd_decouple_verify,
        cmd_bec_states,
        cmd_fingerprint,
    ):
        code = fn(config, emitter)
        if code != EXIT_OK:
            return code
    return code


COMMANDS = {
    "validate": cmd_validate,
    "condense": cmd_condense,
    "phase-diagram": cmd_phase_diagram,
    "decouple-verify": cmd_decouple_verify,
    "bec-states": cmd_bec_states,
    "fingerprint": cmd_fingerprint,
    "full-report": cmd_full_report,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hpbec",
        description="Finite Hubbard-phonon laboratory: condensation, dressing, and BEC states.",
    )
    parser.add_argument("--command", choices=sorted(COMMANDS), required=True)
    parser.add_argument("--config", default=None, help="JSON config path (defaults applied)")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="dotted-path config override, value parsed as JSON",
    )
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)

    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)

    try:
        config = load_config(args.config, args.override)
        out_dir = (
            args.out
            or os.environ.get(OUT_DIR_ENV)
            or config["output"]["directory"]
        )
        emitter = Emitter(out_dir, config, args.command)
        code = COMMANDS[args.command](config, emitter)
        emitter.manifest()
        return code
    except (InfraredDivergence, UnsolvableDensity, BracketError, FloatingPointError) as err:
        print(f"numerical divergence: {err}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (ContractViolation, ValueError) as err:
        print(f"validation failure: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except VerificationFailure as err:
        print(f"verification failure: {err}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
