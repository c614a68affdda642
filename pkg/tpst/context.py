# coding=utf-8
"""
运行上下文模块

封装所有依赖配置的操作：晶格与规范构造、寄存器位点解析、输出后端。
"""

from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from tpst.model.gauge import GaugeConfig, ground_gauge, reverse_triangle_fluxes
from tpst.model.lattice import Geometry, Lattice, build_lattice
from tpst.noise.rates import NoiseModel
from tpst.storage.local import LocalOutputBackend
from tpst.transfer.models import RegisterSetup
from tpst.utils.errors import ConfigError, PreconditionError


class RunContext:
    """
    运行上下文类

    使用示例:
        config = load_config()
        ctx = RunContext(config)

        lattice = ctx.lattice()
        gauge = ctx.gauge(lattice)
        out = ctx.get_output_backend("bands")
    """

    def __init__(self, config: Dict[str, Any], version: str = "", force: bool = False):
        """
        Args:
            config: load_config() 返回的完整配置字典
            version: tpst 版本（写入输出文件）
            force: 是否允许覆盖已有输出
        """
        self.config = config
        self.version = version
        self.force = force

    # === 配置访问 ===

    @property
    def config_hash(self) -> str:
        return self.config.get("CONFIG_HASH", "")

    @property
    def output(self) -> Dict[str, Any]:
        return self.config.get("OUTPUT", {})

    @property
    def kappa(self) -> float:
        return self.config["LATTICE"]["KAPPA"]

    @property
    def seed(self) -> int:
        return int(self.output.get("SEED", 0))

    @property
    def jobs(self) -> Optional[int]:
        return self.output.get("JOBS")

    @property
    def fmt(self) -> str:
        return self.output.get("FORMAT", "csv")

    @property
    def verbose(self) -> bool:
        return bool(self.output.get("VERBOSE", True))

    # === 晶格与规范 ===

    def lattice(self, kind: Optional[str] = None, ly: Optional[int] = None, lx: Optional[int] = None) -> Lattice:
        """按配置（可覆盖类型与尺寸）构造晶格"""
        cfg = self.config["LATTICE"]
        geometry = Geometry(
            kind=kind or cfg["KIND"],
            ly=int(ly or cfg["LY"]),
            lx=int(lx or cfg["LX"]),
            boundary=cfg["BOUNDARY"],
        )
        return build_lattice(geometry)

    def gauge(self, lattice: Lattice, apply_deltas: bool = True) -> GaugeConfig:
        """
        基态规范，叠加配置中的链路增量与三角通量反转

        链路增量只对主晶格有意义（apply_deltas=False 时跳过）。
        """
        cfg = self.config["LATTICE"]
        gauge = ground_gauge(lattice)
        if apply_deltas and cfg["GAUGE_DELTAS"]:
            data = gauge.to_dict()
            data["deltas"] = cfg["GAUGE_DELTAS"]
            try:
                gauge = GaugeConfig.from_dict(lattice, data)
            except PreconditionError as e:
                raise ConfigError(f"lattice.gauge_deltas 无效: {e.message}")
        if cfg["REVERSE_TRIANGLES"]:
            gauge = reverse_triangle_fluxes(gauge)
        return gauge

    # === 寄存器 ===

    @staticmethod
    def default_sites(lattice: Lattice) -> Tuple[Tuple[int, int, str], Tuple[int, int, str]]:
        """默认注入位点：a = A_x(L_y−1, L_x//2)，b = B_x(0, L_x//2)"""
        g = lattice.geometry
        return (g.ly - 1, g.lx // 2, "A_x"), (0, g.lx // 2, "B_x")

    def resolve_site(self, lattice: Lattice, site: Tuple[int, int, str]) -> int:
        i, j, sub = site
        try:
            return lattice.site_index(i, j, sub)
        except (PreconditionError, ValueError) as e:
            raise ConfigError(f"注入位点 {list(site)} 不在晶格内: {e}")

    def register_setup(
        self,
        lattice: Lattice,
        site_a: Optional[Tuple[int, int, str]] = None,
        site_b: Optional[Tuple[int, int, str]] = None,
        delta_s: float = 1.0,
    ) -> RegisterSetup:
        """寄存器设置；Δ_S 在点区方案中会被替换为所选模式能量"""
        default_a, default_b = self.default_sites(lattice)
        a = self.resolve_site(lattice, site_a or default_a)
        b = self.resolve_site(lattice, site_b or default_b)
        return RegisterSetup.for_lattice(lattice, delta_s, a, b).validate(lattice)

    # === 噪声 ===

    def noise_model(self) -> NoiseModel:
        return NoiseModel(**self.config["NOISE"]["MODEL"])

    # === 输出 ===

    def get_output_backend(self, command: str) -> LocalOutputBackend:
        """命令输出目录 {out}/{command}"""
        out_dir = Path(self.output.get("DIR", "output")) / command
        return LocalOutputBackend(str(out_dir), self.config_hash, self.version, force=self.force)
