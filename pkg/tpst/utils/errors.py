# coding=utf-8
"""
自定义错误类

定义 tpst 使用的所有异常类型，每类错误对应一个 CLI 退出码。
"""

from typing import Optional


class TPSTError(Exception):
    """tpst 错误基类"""

    exit_code = 4

    def __init__(self, message: str, code: str = "TPST_ERROR", suggestion: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.suggestion = suggestion

    def to_dict(self) -> dict:
        """转换为字典格式"""
        error_dict = {
            "code": self.code,
            "message": self.message,
            "exit_code": self.exit_code,
        }
        if self.suggestion:
            error_dict["suggestion"] = self.suggestion
        return error_dict


class ConfigError(TPSTError):
    """配置错误（退出码 2）"""

    exit_code = 2

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            code="CONFIG_ERROR",
            suggestion=suggestion or "请检查 config/config.yaml 的键名和取值范围"
        )


class PreconditionError(TPSTError):
    """前置条件不满足（退出码 3）"""

    exit_code = 3

    def __init__(self, message: str, code: str = "PRECONDITION_FAILED", suggestion: Optional[str] = None):
        super().__init__(message=message, code=code, suggestion=suggestion)


class InvalidPathError(PreconditionError):
    """对偶路径无效"""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            code="INVALID_DUAL_PATH",
            suggestion=suggestion or "相邻两步必须共享一条链路，可用 dual_path() 生成最短路径"
        )


class ChiralityError(PreconditionError):
    """手征性阻止波包到达"""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            code="CHIRALITY_BLOCKED",
            suggestion=suggestion or "交换 a/b 或翻转三角通量以反转边缘传播方向"
        )


class NumericalError(TPSTError):
    """数值失败（退出码 4）"""

    exit_code = 4

    def __init__(self, message: str, code: str = "NUMERICAL_FAILURE", suggestion: Optional[str] = None):
        super().__init__(message=message, code=code, suggestion=suggestion)


class LeakageError(NumericalError):
    """寄存器子空间泄漏超限"""

    def __init__(self, leakage: float, threshold: float):
        super().__init__(
            message=f"寄存器子空间泄漏 {leakage:.3e} 超过阈值 {threshold:.1e}",
            code="REGISTER_LEAKAGE",
            suggestion="减小耦合强度或检查共振条件"
        )
        self.leakage = leakage
