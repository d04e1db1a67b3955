"""
文本报告生成器

JSON 输出直接用各结果对象的 to_json；这里负责给人看的文本形式。
"""
import os
from datetime import datetime
from typing import List, Optional

import pandas as pd

from core.global_report import Sym3Report
from core.verifier import SuiteResult
from core.wd_sym3 import LocalSym3Record


def _table(rows: List[dict], columns: Optional[List[str]] = None) -> List[str]:
    if not rows:
        return ["   （无）"]
    df = pd.DataFrame(rows, columns=columns)
    return ["   " + line for line in df.to_string(index=False).splitlines()]


def _factorization(exps: dict) -> str:
    return " · ".join(f"{p}^{e}" if e != 1 else str(p) for p, e in sorted(exps.items()) if e) or "1"


def local_record_lines(record: LocalSym3Record) -> List[str]:
    """单个素数处的分类、导子与方差数"""
    lp = record.lp
    info = [f"📍 p = {lp.p}（{lp.tag}，N_p = {lp.n_p}，C_p = {lp.c_p}）"]
    info.append(f"   类型: {record.type_class.name}")
    if record.type_class.phi is not None:
        info.append(f"   φ: {record.type_class.phi}，伙伴 {record.type_class.partner}")
    cond = record.conductor
    mark = "✅" if cond.agrees else "❌"
    closed = cond.closed_form if cond.closed_form is not None else f"不适用（{cond.reason}）"
    info.append(f"   a(sym³): 机制 {cond.machinery}，闭式 {closed} [{cond.label}] {mark}")
    if record.variance is None:
        info.append(f"   ε_p: 不适用（{record.variance_error}）")
        return info
    v = record.variance
    info.append(f"   ε_p（定义式）: {v.definitional}")
    closed = v.closed
    if closed.expected() is not None:
        mark = "✅" if v.agrees else "❌"
        info.append(f"   ε_p（闭式 {closed.label}）: {closed.expected()} {mark}")
    if closed.gauss is not None:
        info.append(f"   Gauss 和比值: {closed.gauss.render()}")
    if closed.tabulated is not None and closed.tabulated_matches() is False:
        info.append(f"   ⚠️ 表中写法 {closed.tabulated} 与精确值不同")
    if closed.note:
        info.append(f"   注: {closed.note}")
    return info


class ReportGenerator:
    """描述文件的 sym³ 报告"""

    def __init__(self, report: Sym3Report):
        self.report = report
        self.timestamp = datetime.now()

    def generate(self) -> str:
        d = self.report.descriptor
        report = []

        report.append("=" * 70)
        report.append(f"📊 sym³ 报告 - N = {d.level_number}，k = {d.weight}")
        report.append("=" * 70)
        report.append("")

        report.append("一、全局导子")
        report.append("-" * 40)
        report.extend(self._generate_conductor())
        report.append("")

        report.append("二、素数划分")
        report.append("-" * 40)
        report.extend(self._generate_partition())
        report.append("")

        report.append("三、局部分析")
        report.append("-" * 40)
        for relation in self.report.relations:
            report.extend(local_record_lines(relation.local))
            report.append("")

        report.append("四、扭转关系")
        report.append("-" * 40)
        report.extend(self._generate_twists())
        report.append("")

        report.append("=" * 70)
        report.append(f"生成时间: {self.timestamp.strftime('%Y-%m-%d %H:%M:%S')}")
        return "\n".join(report)

    def _generate_conductor(self):
        c = self.report.conductor
        info = [f"   N(sym³) = {_factorization(c.per_prime)} = {c.value}"]
        if c.agrees:
            info.append("   ✅ 闭式乘积与逐素数结果一致")
        else:
            info.append(f"   ❌ 闭式乘积给出 {_factorization(c.closed_form)}")
        rows = [{"p": p, "N_p": self.report.descriptor.n_p(p), "a(sym³)": e, "闭式": c.closed_form.get(p)}
                for p, e in sorted(c.per_prime.items())]
        info.extend(_table(rows))
        return info

    def _generate_partition(self):
        part = self.report.partition.to_json()
        return [f"   {name}: {primes}" for name, primes in part.items() if primes] or ["   （空）"]

    def _generate_twists(self):
        info = []
        for r in self.report.relations:
            info.append(f"   p = {r.p}: {r.render()}")
            if r.q_product is not None:
                mark = "✅" if r.product_matches else "❌"
                info.append(f"      ∏_q ε_q = {r.q_product} {mark}")
            if r.verdict:
                info.append(f"      判定: {r.verdict}")
        return info

    def save_to_file(self, directory: str = 'outputs') -> str:
        os.makedirs(directory, exist_ok=True)
        stamp = self.timestamp.strftime('%Y%m%d_%H%M%S')
        filename = os.path.join(directory, f"sym3_N{self.report.descriptor.level_number}_{stamp}.txt")
        with open(filename, 'w', encoding='utf-8') as f:
            f.write(self.generate())
        return filename


def verification_text(results: List[SuiteResult]) -> str:
    """验证套件汇总"""
    lines = ["=" * 70, "🔬 验证套件", "=" * 70, ""]
    summary = [{"套件": r.name, "seed": r.seed, "检查数": r.checked, "失败": len(r.failures),
                "结果": "通过" if r.passed else "失败"} for r in results]
    lines.extend(_table(summary))
    for r in results:
        lines.append("")
        lines.append(f"{'✅' if r.passed else '❌'} {r.name}")
        lines.append("-" * 40)
        lines.extend(_table(r.rows))
        for message in r.failures[:20]:
            lines.append(f"   ❌ {message}")
        if len(r.failures) > 20:
            lines.append(f"   ... 另有 {len(r.failures) - 20} 条失败")
        for note in r.notes:
            lines.append(f"   📝 {note}")
    return "\n".join(lines)
