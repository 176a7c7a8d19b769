"""``adicca`` command line.

Exit status: 0 on success, 1 when the pipeline fails (the diagnostic goes to
standard error), 2 on usage errors.  Input files may be ``-`` for stdin and
output defaults to stdout, so subcommands compose with pipes.
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click

from . import io
from .builders import from_odometer, from_substitution, from_toeplitz, odometer_canonical
from .diagram import analyze, telescope, validate
from .errors import AdicError
from .render import RenderSpec, parse_range, render_pgm, render_text
from .spacetime import admissible, patch, saturated_tiles
from .synth import Simulator, build_rule, decode, make_x_init, verify_conjugacy
from .vershik import minimal_path, orbit, path_to_json


def _emit(text: str, out: str) -> None:
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _diagram(path):
    return validate(io.read(path, io.diagram_from_json))


def _range(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_range(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _ints(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers") from None


OUT = click.option("-o", "--out", default="-", show_default=True, help="Output file.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--seed", type=int, default=None, help="Reserved; no core path is random.")
@click.version_option(package_name="artifact")
def main(seed):
    """Adic systems on ordered Bratteli diagrams and their cellular automata."""


# -- builders ---------------------------------------------------------------------
@main.command("build-sub")
@click.argument("spec", default="-")
@OUT
def build_sub(spec, out):
    """Diagram of a proper primitive substitution."""
    s = io.read(spec, io.substitution_from_json)
    _emit(io.dumps(io.diagram_to_json(from_substitution(s))), out)


@main.command("build-odo")
@click.argument("spec", default="-")
@OUT
def build_odo(spec, out):
    """Canonical single-vertex diagram of an odometer."""
    o = io.read(spec, io.odometer_from_json)
    N, M, _ = odometer_canonical(o)
    click.echo(f"canonical form: N={N}, M={M}", err=True)
    _emit(io.dumps(io.diagram_to_json(from_odometer(o))), out)


@main.command("build-toeplitz")
@click.argument("spec", default="-")
@click.option("--horizon", type=click.IntRange(1), default=256, show_default=True)
@click.option("-K", "K", type=click.IntRange(1), default=None, help="Declared width bound.")
@click.option("--report", default=None, help="Write the fill report here.")
@OUT
def build_toeplitz(spec, horizon, K, report, out):
    """Diagram of a staged Toeplitz sequence."""
    t = io.read(spec, io.toeplitz_from_json)
    d, words, rep = from_toeplitz(t, horizon, K)
    if report:
        _emit(io.dumps({**dataclasses.asdict(rep), "words": words}), report)
    _emit(io.dumps(io.diagram_to_json(d)), out)


# -- diagram inspection -----------------------------------------------------------
@main.command("analyze")
@click.argument("diagram", default="-")
@OUT
def analyze_cmd(diagram, out):
    """Width, focus, primitivity and order properties."""
    rep = analyze(_diagram(diagram))
    obj = dataclasses.asdict(rep)
    obj["focused"] = rep.focused
    obj["focus"] = None if rep.focus is None else {str(k): v for k, v in rep.focus.items()}
    _emit(io.dumps(obj), out)


@main.command("telescope")
@click.argument("diagram", default="-")
@click.option("--cuts", callback=_ints, required=True, help="Cut levels, starting with 0.")
@click.option("--period", type=click.IntRange(1), default=None)
@OUT
def telescope_cmd(diagram, cuts, period, out):
    """Telescope a diagram at the given levels."""
    _emit(io.dumps(io.diagram_to_json(telescope(_diagram(diagram), cuts, period))), out)


@main.command("orbit")
@click.option("--diagram", required=True)
@click.option("--start", default=None, help="Path JSON; defaults to the minimal path.")
@click.option("--steps", type=int, required=True, help="Negative for predecessors.")
@OUT
def orbit_cmd(diagram, start, steps, out):
    """Successor orbit as JSON lines."""
    d = _diagram(diagram)
    p = io.read(start, io.path_from_obj) if start else minimal_path(d)
    log = orbit(d, p, steps)
    _emit("".join(json.dumps(path_to_json(e)) + "\n" for e in log.entries), out)


# -- spacetime ----------------------------------------------------------------------
@main.command("patch")
@click.option("--diagram", required=True)
@click.option("--rows", callback=_range, default="-5..0", show_default=True)
@click.option("--width", type=click.IntRange(1), default=8, show_default=True)
@click.option("--base", default=None, help="Path JSON for row 0; defaults to the minimal path.")
@OUT
def patch_cmd(diagram, rows, width, base, out):
    """Rows of the spacetime diagram through a path."""
    d = _diagram(diagram)
    p = io.read(base, io.path_from_obj) if base else minimal_path(d)
    _emit(io.dumps(io.patch_to_json(patch(d, p, rows[0], rows[1], width))), out)


@main.command("tiles")
@click.option("--diagram", required=True)
@click.option("--rows", type=click.IntRange(1), default=64, show_default=True)
@click.option("--width", type=click.IntRange(1), default=8, show_default=True)
@click.option("--check", default=None, help="Patch JSON to test for admissibility.")
@OUT
def tiles_cmd(diagram, rows, width, check, out):
    """Harvest the 2x2 tile set around the minimal path."""
    d = _diagram(diagram)
    ts = saturated_tiles(d, minimal_path(d), rows, width)
    click.echo(f"{len(ts)} tiles, saturated={ts.saturated}", err=True)
    _emit(io.dumps(io.tiles_to_json(ts)), out)
    if check:
        res = admissible(io.read(check, io.patch_from_json), ts)
        if not res.ok:
            m, j, _ = res.violations[0]
            raise AdicError(f"patch is not admissible: {len(res.violations)} bad blocks, first at row {m}, column {j}")


# -- cellular automaton -------------------------------------------------------------
HARVEST = [
    click.option("--rows", type=click.IntRange(1), default=128, show_default=True, help="Harvest half-height."),
    click.option("--width", type=click.IntRange(1), default=16, show_default=True, help="Harvest width."),
]


def _harvest(f):
    for opt in reversed(HARVEST):
        f = opt(f)
    return f


@main.command("synth")
@click.option("--diagram", required=True)
@_harvest
@click.option("--x-init", "x_init", default=None, help="Also write the initial configuration here.")
@OUT
def synth_cmd(diagram, rows, width, x_init, out):
    """Synthesize a functional local rule."""
    d = _diagram(diagram)
    rule = build_rule(d, rows, width)
    click.echo(f"rule: w={rule.w}, {len(rule)} entries, saturated={rule.saturated}", err=True)
    _emit(io.dumps(io.rule_to_json(rule)), out)
    if x_init:
        _emit(io.dumps(io.config_to_json(make_x_init(d, rule.w))), x_init)


@main.command("simulate")
@click.option("--rule", "rule_path", required=True)
@click.option("--config", "config_path", required=True)
@click.option("--steps", type=click.IntRange(0), required=True)
@OUT
def simulate_cmd(rule_path, config_path, steps, out):
    """Run the rule; writes the final configuration."""
    rule = io.read(rule_path, io.rule_from_json)
    sim = Simulator(io.read(config_path, io.config_from_json), rule)
    for _ in range(steps):
        sim.step()
    _emit(io.dumps(io.config_to_json(sim.snapshot())), out)


@main.command("decode")
@click.option("--rule", "rule_path", required=True)
@click.option("--config", "config_path", required=True)
@click.option("--depth", type=click.IntRange(0), required=True)
@OUT
def decode_cmd(rule_path, config_path, depth, out):
    """Path coded by a configuration, truncated at a depth."""
    rule = io.read(rule_path, io.rule_from_json)
    p = decode(io.read(config_path, io.config_from_json), rule, depth)
    _emit(io.dumps(path_to_json(p)), out)


@main.command("verify")
@click.option("--diagram", required=True)
@click.option("--steps", type=click.IntRange(0), default=10_000, show_default=True)
@click.option("--depth", type=click.IntRange(1), default=12, show_default=True)
@_harvest
def verify_cmd(diagram, steps, depth, rows, width):
    """Build, simulate and compare against the adic orbit."""
    d = _diagram(diagram)
    rule = build_rule(d, rows, width)
    rep = verify_conjugacy(d, steps, depth, rule)
    click.echo(
        f"steps={rep.steps} depth={rep.depth} w={rep.w} rule={rep.rule_size} "
        f"mismatches={len(rep.mismatches)} injective={rep.injective}"
    )
    if not rep.ok:
        n = rep.mismatches[0][0] if rep.mismatches else None
        raise AdicError(f"conjugacy check failed (first mismatch at n={n})")


@main.command("render")
@click.option("--patch", "patch_path", required=True)
@click.option("--rows", callback=_range, default=None)
@click.option("--cols", callback=_range, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "pgm"]), default="text", show_default=True)
@click.option("--scale", type=click.IntRange(1), default=8, show_default=True)
@click.option("--legend", "legend_path", default=None, help="Legend JSON (pgm only).")
@OUT
def render_cmd(patch_path, rows, cols, fmt, scale, legend_path, out):
    """Draw a patch as a text grid or a PGM image."""
    p = io.read(patch_path, io.patch_from_json)
    try:
        spec = RenderSpec.for_patch(p, rows, cols, scale)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    if fmt == "text":
        _emit(render_text(p, spec), out)
        return
    data, lut = render_pgm(p, spec)
    if out == "-":
        sys.stdout.buffer.write(data)
    else:
        with open(out, "wb") as fh:
            fh.write(data)
    if legend_path:
        _emit(io.dumps(lut), legend_path)


def run(argv=None) -> int:
    """Entry point returning the exit status instead of raising."""
    try:
        main.main(args=argv, prog_name="adicca", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 1
    except (AdicError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


def entry() -> None:
    sys.exit(run())
