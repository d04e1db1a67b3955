"""
领域异常
"""


class ArithmeticDomainError(ValueError):
    """算术领域错误基类（CLI 退出码 1）"""


class EnumerationTooLarge(ArithmeticDomainError):
    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"单位群阶 {order} 超过枚举上限 {cap}")


class LevelTooLow(ArithmeticDomainError):
    def __init__(self, level: int, required: int, what: str = ""):
        self.level = level
        self.required = required
        super().__init__(f"层级 {level} 过低{('（' + what + '）') if what else ''}，至少需要 {required}")


class Inapplicable(ArithmeticDomainError):
    """闭式公式或引理条件不满足"""


class PrecisionError(ArithmeticDomainError):
    """p进提升在给定精度下不收敛"""


class DescriptorError(ArithmeticDomainError):
    def __init__(self, violations):
        # [(json_path, message), ...]
        self.violations = list(violations)
        lines = [f"{path}: {msg}" for path, msg in self.violations]
        super().__init__("描述文件校验失败:\n  " + "\n  ".join(lines))
