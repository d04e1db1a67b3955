# 核心模块初始化
from .global_report import NewformDescriptor, build_report, global_sym3_conductor
from .report_generator import ReportGenerator
from .verifier import SuiteVerifier
from .wd_sym3 import analyze_local, local_sym3_conductor, variance_epsilon

__all__ = ['NewformDescriptor', 'build_report', 'global_sym3_conductor', 'ReportGenerator',
           'SuiteVerifier', 'analyze_local', 'local_sym3_conductor', 'variance_epsilon']
