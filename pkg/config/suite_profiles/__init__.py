"""
验证套件配置包
"""
import os
import importlib

# 自动发现所有套件配置，文件名中的下划线对应套件名中的连字符
SUITE_PROFILES = {}


def load_all_profiles():
    """加载所有套件配置"""
    profile_dir = os.path.dirname(__file__)
    for filename in sorted(os.listdir(profile_dir)):
        if filename.endswith('.py') and filename != '__init__.py':
            module_name = filename[:-3]
            try:
                module = importlib.import_module(f'config.suite_profiles.{module_name}')
                profile_key = f"{module_name.upper()}_PROFILE"
                if hasattr(module, profile_key):
                    SUITE_PROFILES[module_name.replace('_', '-')] = getattr(module, profile_key)
            except ImportError:
                continue

    return SUITE_PROFILES


# 预加载所有配置文件
load_all_profiles()
