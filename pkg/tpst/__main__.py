# coding=utf-8
"""
tpst 主程序

手征自旋液体拓扑量子态传输数值实验
支持: python -m tpst <子命令>
"""

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from tpst import __version__
from tpst.context import RunContext
from tpst.core import load_config
from tpst.fermion import (
    BAND_HEADER,
    assemble,
    band_structure,
    band_summary,
    bloch_bulk_gap,
    bloch_spectrum,
    chern_number,
    diagonalize,
    edge_channel,
    vortex_gap,
)
from tpst.model import build_lattice
from tpst.model.lattice import Geometry
from tpst.noise import (
    SCALING_LABEL,
    SWEEP_HEADER,
    DisorderSpec,
    bulk_suppression,
    decay_edge_noise,
    disorder_sweep,
    golden_rule_numeric,
    rate_table,
    thermal_correction_exponent,
    vortex_density,
)
from tpst.oracle import build_cluster, compare_spectra, from_bonds, ground_degeneracy, run_spin_protocol
from tpst.storage import RunRecord
from tpst.transfer import (
    TRACE_HEADER,
    RegisterSetup,
    cylinder_length,
    droplet_plan,
    dot_plan,
    edge_route,
    emitted_profile,
    gate_extract,
    gaussian_profile,
    run_dot_transfer,
    run_droplet_transfer,
    arrival_time,
)
from tpst.utils.errors import ConfigError, NumericalError, PreconditionError, TPSTError

RATE_HEADER = ["p", "T", "gamma"]
SWEEP_TARGETS = ("disorder", "rates", "golden")


def _finish(ctx: RunContext, out, command: str, summary: Dict[str, Any]) -> int:
    out.record(RunRecord(command=command, config_hash=ctx.config_hash, version=__version__,
                         seed=ctx.seed, summary=summary))
    return 0


# === 费米子 ===

def cmd_bands(ctx: RunContext, args) -> int:
    """圆柱能带 CSV + 摘要 JSON"""
    lattice = ctx.lattice()
    bands = band_structure(
        lattice, ctx.gauge(lattice), ctx.kappa,
        edge_rows=ctx.config["FERMION"]["EDGE_ROWS"], jobs=ctx.jobs, verbose=ctx.verbose,
    )
    summary = band_summary(bands)
    print(f"[能带] Δ_b = {summary['bulk_gap']:.4f}, k_c·a = {summary['edge_crossing_k']:.4f}, "
          f"v = {summary['edge_velocity']:.4f}, ξ = {summary['localization_length']:.3f}")
    out = ctx.get_output_backend("bands")
    out.write_table("bands", BAND_HEADER, bands.rows(), ctx.fmt)
    out.write_json("bands_summary.json", summary)
    return _finish(ctx, out, "bands", summary)


def cmd_vortex_gaps(ctx: RunContext, args) -> int:
    """单涡旋能隙 JSON {triangle, dodecagon}"""
    cfg = ctx.config["FERMION"]["VORTEX"]
    lattice = ctx.lattice("torus", cfg["LY"], cfg["LX"])
    gauge = ctx.gauge(lattice, apply_deltas=False)
    payload: Dict[str, Any] = {"details": {}}
    for species in cfg["SPECIES"]:
        result = vortex_gap(lattice, gauge, ctx.kappa, species, cfg["SEPARATIONS"], jobs=ctx.jobs)
        payload[species] = result.gap
        payload["details"][species] = result.to_dict()
        print(f"[涡旋] {species}: Δ_v = {result.gap:.4f}")
    out = ctx.get_output_backend("vortex-gaps")
    out.write_json("vortex_gaps.json", payload)
    return _finish(ctx, out, "vortex-gaps", {s: payload[s] for s in cfg["SPECIES"]})


def cmd_chern(ctx: RunContext, args) -> int:
    """占据带 Chern 数与 Bloch 体能隙 JSON"""
    cfg = ctx.config["FERMION"]["CHERN"]
    lattice = ctx.lattice("torus", cfg["SIZE"], cfg["SIZE"])
    gauge = ctx.gauge(lattice, apply_deltas=False)
    result = chern_number(lattice, gauge, ctx.kappa, grid=cfg["GRID"])
    payload = result.to_dict()
    payload["bloch_bulk_gap"] = bloch_bulk_gap(lattice, gauge, ctx.kappa, grid=cfg["BLOCH_GRID"])
    out = ctx.get_output_backend("chern")
    out.write_json("topology.json", payload)
    return _finish(ctx, out, "chern", {"chern": result.chern, "quantization_defect": result.quantization_defect})


# === 传输 ===

def _transfer_dot(ctx: RunContext) -> Dict[str, Any]:
    cfg = ctx.config["TRANSFER"]["DOT"]
    lattice = ctx.lattice("droplet", cfg["LY"], cfg["LX"])
    spectrum = diagonalize(assemble(lattice, ctx.gauge(lattice, apply_deltas=False), ctx.kappa))
    setup = ctx.register_setup(lattice, cfg["SITE_A"], cfg["SITE_B"])
    ratio = cfg["RATIO"]
    if ratio is None:
        if cfg["G_L"] is None:
            raise ConfigError("transfer.dot 需要 ratio 或 g_l")
        setup = setup.with_couplings(cfg["G_L"], 0.0)
    plan = dot_plan(spectrum, setup, mode=cfg["MODE"], ratio=ratio, verbose=ctx.verbose)
    trace, _ = run_dot_transfer(spectrum, plan, form=cfg["FORM"], method=cfg["METHOD"],
                                samples=cfg["SAMPLES"], verbose=ctx.verbose)
    gate = gate_extract(trace, plan)
    return {
        "trace": trace,
        "payload": {"regime": "dot", "trace": trace.summary(), "plan": plan.to_dict(), "gate": gate.to_dict()},
        "summary": {"fidelity": trace.fidelity, "gate_fidelity": gate.fidelity},
    }


def _edge_topology(ctx: RunContext):
    """参考圆柱能带 + 环面 Chern 数；边缘群速度取 TopologyResult.edge_velocity"""
    reference = ctx.lattice("cylinder")
    bands = band_structure(
        reference, ctx.gauge(reference, apply_deltas=False), ctx.kappa,
        edge_rows=ctx.config["FERMION"]["EDGE_ROWS"], jobs=ctx.jobs, verbose=ctx.verbose,
    )
    cfg = ctx.config["FERMION"]["CHERN"]
    torus = ctx.lattice("torus", cfg["SIZE"], cfg["SIZE"])
    topology = chern_number(torus, ctx.gauge(torus, apply_deltas=False), ctx.kappa, grid=cfg["GRID"], bands=bands)
    if topology.chern == 0 or not topology.edge_velocity:
        raise PreconditionError(
            f"Chern 数 {topology.chern}，没有手征边缘通道",
            suggestion="检查 lattice.reverse_triangles 与规范配置"
        )
    return topology


def _droplet_channel(ctx: RunContext, cfg: Dict[str, Any]) -> Dict[str, Any]:
    """液滴区传输通道：圆柱底边（v 取自拓扑计算）或连续手征环"""
    if cfg["CHANNEL"] == "ring":
        ring = cfg["RING"]
        length, velocity = ring["LENGTH"], ring["VELOCITY"]
        spectrum = edge_channel(length, velocity, ctx.kappa)
        setup = RegisterSetup(delta_s=ring["DELTA_S"], site_a=ring["SITE_A"], site_b=ring["SITE_B"]).validate()
        arc = float((ring["SITE_B"] - ring["SITE_A"]) % length)
        return {"spectrum": spectrum, "setup": setup, "velocity": velocity, "arc": arc,
                "region": None, "route": None, "topology": None, "ly": None}

    topology = _edge_topology(ctx)
    velocity = topology.edge_velocity
    ly = cfg["LY"] or cylinder_length(velocity, cfg["SIGMA"], cfg["ARC"], cfg["UPSTREAM"])
    lattice = ctx.lattice("cylinder", ly, cfg["LX"])
    spectrum = bloch_spectrum(lattice, ctx.gauge(lattice, apply_deltas=False), ctx.kappa,
                              jobs=ctx.jobs, verbose=ctx.verbose)
    route = edge_route(lattice, velocity, cfg["ARC"], upstream_cells=cfg["UPSTREAM"])
    setup = RegisterSetup.for_lattice(lattice, cfg["DELTA_S"], route.site_a, route.site_b).validate(lattice)
    return {"spectrum": spectrum, "setup": setup, "velocity": abs(velocity), "arc": route.arc_length,
            "region": list(route.upstream), "route": route, "topology": topology, "ly": ly}


def _transfer_droplet(ctx: RunContext) -> Dict[str, Any]:
    cfg = ctx.config["TRANSFER"]["DROPLET"]
    channel = _droplet_channel(ctx, cfg)
    spectrum, setup, velocity, arc = channel["spectrum"], channel["setup"], channel["velocity"], channel["arc"]
    sigma = cfg["SIGMA"]
    center = cfg["CENTER"] if cfg["CENTER"] is not None else 5.0 * sigma
    delay = cfg["DELAY"] if cfg["DELAY"] is not None else arc / velocity
    duration = center + delay + 5.0 * sigma
    times = np.linspace(0.0, duration, int(round(duration / cfg["TIME_STEP"])) + 1)
    profile = gaussian_profile(times, center, sigma)
    plan = droplet_plan(
        spectrum, setup, times, profile, velocity, arc,
        delay=delay, g_max=cfg["G_MAX"], eps_res=cfg["EPS_RES"], strict=cfg["STRICT"],
        compensate=cfg["COMPENSATE"], verbose=ctx.verbose,
    )
    trace = run_droplet_transfer(spectrum, plan, method=cfg["METHOD"], region=channel["region"],
                                 verbose=ctx.verbose)
    target = np.interp(trace.times, plan.times, np.abs(plan.profile))
    emitted = emitted_profile(trace)
    error = float(np.linalg.norm(emitted - target) / np.linalg.norm(target))
    payload = {
        "regime": "droplet",
        "channel": cfg["CHANNEL"],
        "trace": trace.summary(),
        "plan": plan.to_dict(),
        "emission_error": error,
        "arrival_time": arrival_time(trace),
        "expected_arrival": center + plan.delay,
        "time_step": plan.dt,
    }
    if channel["route"] is not None:
        payload["route"] = channel["route"].to_dict()
        payload["topology"] = channel["topology"].to_dict()
        payload["ly"] = channel["ly"]
        payload["upstream_leakage"] = float(np.max(trace.region_prob, initial=0.0))
    return {"trace": trace, "payload": payload, "summary": {"fidelity": trace.fidelity, "emission_error": error}}


def cmd_transfer(ctx: RunContext, args) -> int:
    """传输轨迹 + 门/波包 JSON"""
    regime = ctx.config["TRANSFER"]["REGIME"]
    result = _transfer_dot(ctx) if regime == "dot" else _transfer_droplet(ctx)
    out = ctx.get_output_backend("transfer")
    out.write_table("transfer_trace", TRACE_HEADER, result["trace"].rows(), ctx.fmt)
    out.write_json("transfer.json", result["payload"])
    return _finish(ctx, out, "transfer", result["summary"])


# === 噪声 ===

def _sweep_disorder(ctx: RunContext, out) -> Dict[str, Any]:
    cfg = ctx.config["NOISE"]["DISORDER"]
    lattice = ctx.lattice("droplet", cfg["LY"], cfg["LX"])
    setup = ctx.register_setup(lattice, cfg["SITE_A"], cfg["SITE_B"])
    spec = DisorderSpec(
        kind=cfg["KIND"],
        strength=cfg["STRENGTH"],
        n_pairs=cfg["N_PAIRS"],
        min_distance=cfg["MIN_DISTANCE"],
        localization_length=ctx.config["NOISE"]["MODEL"]["localization_length"],
        retune=cfg["RETUNE"],
    )
    seeds = [ctx.seed + k for k in range(cfg["N_SEEDS"])]
    result = disorder_sweep(lattice, setup, spec, seeds, ctx.kappa, ratio=cfg["RATIO"],
                            jobs=ctx.jobs, verbose=ctx.verbose)
    out.write_table("sweep", SWEEP_HEADER, result.rows(), ctx.fmt)
    summary = result.summary()
    out.write_json("sweep_summary.json", summary)
    return {"median_fidelity": summary["median_fidelity"], "median_drop": summary["median_drop"]}


def _sweep_rates(ctx: RunContext, out) -> Dict[str, Any]:
    noise = ctx.config["NOISE"]
    model = ctx.noise_model()
    temperatures = noise["TEMPERATURES"]
    out.write_table("rates", RATE_HEADER, rate_table(model, noise["MOMENTA"], temperatures), ctx.fmt)
    positive = [t for t in temperatures if t > 0]
    payload: Dict[str, Any] = {
        "label": SCALING_LABEL,
        "model": model.to_dict(),
        "per_temperature": [
            {
                "T": t,
                "vortex_density": vortex_density(model, t),
                "edge_noise_rate": decay_edge_noise(model, model.delta_s, t),
                "bulk_suppression": bulk_suppression(model, noise["DISTANCE"], t),
            }
            for t in temperatures
        ],
    }
    if len(positive) >= 2:
        payload["thermal_exponent"] = thermal_correction_exponent(model, noise["MOMENTA"][-1], positive)
    out.write_json("rates_summary.json", payload)
    print(f"[噪声] 速率表: {len(noise['MOMENTA'])} 个动量 x {len(temperatures)} 个温度（{SCALING_LABEL}）")
    return {"label": SCALING_LABEL, "thermal_exponent": payload.get("thermal_exponent")}


def _sweep_golden(ctx: RunContext, out) -> Dict[str, Any]:
    cfg = ctx.config["NOISE"]["GOLDEN_RULE"]
    result = golden_rule_numeric(cfg["INTERACTION"], cfg["VELOCITY"], cfg["P"],
                                 decade=cfg["DECADE"], points=cfg["POINTS"])
    out.write_table("golden_rule", RATE_HEADER, result.rows(), ctx.fmt)
    out.write_json("golden_rule_summary.json", result.to_dict())
    return {"exponent": result.exponent}


def cmd_sweep(ctx: RunContext, args) -> int:
    """无序扫描 / 速率表 / 黄金规则积分"""
    target = args.target
    runners: Dict[str, Callable] = {"disorder": _sweep_disorder, "rates": _sweep_rates, "golden": _sweep_golden}
    out = ctx.get_output_backend(f"sweep-{target}")
    summary = runners[target](ctx, out)
    return _finish(ctx, out, f"sweep-{target}", summary)


# === 多体验证 ===

def build_oracle_cluster(ctx: RunContext):
    cfg = ctx.config["ORACLE"]
    kind = cfg["CLUSTER"]
    if kind == "two_spin":
        return from_bonds(2, [(0, 1, "z")], ctx.kappa, spin_cap=cfg["SPIN_CAP"])
    if kind == "triangle":
        return from_bonds(3, [(0, 1, "z"), (1, 2, "x"), (2, 0, "y")], ctx.kappa, spin_cap=cfg["SPIN_CAP"])
    lattice = build_lattice(Geometry("droplet", 1, 1))
    if kind == "droplet":
        return build_cluster(lattice, ctx.kappa, spin_cap=cfg["SPIN_CAP"])
    setup = RegisterSetup.for_lattice(
        lattice, 1.0, lattice.site_index(0, 0, "A_x"), lattice.site_index(0, 0, "B_y")
    )
    return build_cluster(lattice, ctx.kappa, registers=setup, spin_cap=cfg["SPIN_CAP"])


def cmd_oracle(ctx: RunContext, args) -> int:
    """精确对角化与扇区投影的比较 JSON（含寄存器时附多体协议）"""
    cfg = ctx.config["ORACLE"]
    cluster = build_oracle_cluster(ctx)
    report = compare_spectra(cluster, ctx.jobs)
    if report["max_mismatch"] > cfg["TOLERANCE"]:
        raise NumericalError(
            f"扇区投影谱与精确谱偏差 {report['max_mismatch']:.3e} 超过 {cfg['TOLERANCE']:.1e}",
            code="ORACLE_MISMATCH",
        )
    report["cluster"] = cfg["CLUSTER"]
    report["degeneracy"] = ground_degeneracy(cluster, ctx.jobs)
    summary: Dict[str, Any] = {"max_mismatch": report["max_mismatch"], "dimension": report["dimension"]}
    if cluster.registers:
        protocol = run_spin_protocol(cluster, ratio=cfg["RATIO"], mu=cfg["MU"],
                                     leakage_threshold=cfg["LEAKAGE_THRESHOLD"])
        report["protocol"] = protocol.to_dict()
        summary["gate_fidelity"] = protocol.fidelity
    out = ctx.get_output_backend("oracle")
    out.write_json("oracle.json", report)
    return _finish(ctx, out, "oracle", summary)


def cmd_validate(ctx: RunContext, args) -> int:
    """只校验配置并打印摘要"""
    print(f"[CLI] 配置有效: {ctx.config['CONFIG_PATH']}")
    print(f"config_hash={ctx.config_hash}")
    return 0


COMMANDS: Dict[str, Callable[[RunContext, Any], int]] = {
    "bands": cmd_bands,
    "vortex-gaps": cmd_vortex_gaps,
    "transfer": cmd_transfer,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "chern": cmd_chern,
    "validate": cmd_validate,
}

HELP = {
    "bands": "圆柱能带与边缘拟合",
    "vortex-gaps": "外推单涡旋能隙",
    "transfer": "点区或液滴区传输",
    "sweep": "无序扫描、退相干速率表或黄金规则积分",
    "oracle": "小团簇多体验证",
    "chern": "占据带 Chern 数",
    "validate": "校验配置并打印 config_hash",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="配置文件路径（默认 CONFIG_PATH 或 config/config.yaml）")
    common.add_argument("--seed", type=int, default=None, help="随机种子（覆盖 output.seed）")
    common.add_argument("--out", default=None, help="输出目录（覆盖 output.dir）")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="表格输出格式")
    common.add_argument("--jobs", type=int, default=None, help="并行宽度（默认可用核数）")
    common.add_argument("--force", action="store_true", help="允许覆盖已存在的输出文件")

    parser = argparse.ArgumentParser(
        prog="tpst",
        description="tpst - 手征自旋液体拓扑量子态传输数值实验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
退出码:
  0  成功
  2  配置错误
  3  前置条件不满足
  4  数值失败

示例:
  tpst bands --config config/config.yaml
  tpst transfer --out runs/dot --format json
  tpst sweep --target golden
""",
    )
    parser.add_argument("--version", action="version", version=f"tpst {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, parents=[common], help=HELP[name])
        if name == "sweep":
            cmd.add_argument("--target", choices=SWEEP_TARGETS, default="disorder", help="扫描内容")
    return parser


def _apply_overrides(config: Dict[str, Any], args) -> None:
    output = config["OUTPUT"]
    if args.seed is not None:
        output["SEED"] = args.seed
    if args.out is not None:
        output["DIR"] = args.out
    if args.format is not None:
        output["FORMAT"] = args.format
    if args.jobs is not None:
        output["JOBS"] = args.jobs


def main(argv: Optional[List[str]] = None) -> int:
    """主程序入口"""
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        _apply_overrides(config, args)
        ctx = RunContext(config, version=__version__, force=args.force)
        return COMMANDS[args.command](ctx, args)
    except TPSTError as e:
        sys.stderr.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
        return e.exit_code
    except Exception as e:
        error = {"code": "INTERNAL_ERROR", "message": f"{type(e).__name__}: {e}", "exit_code": 4}
        sys.stderr.write(json.dumps(error, ensure_ascii=False) + "\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
