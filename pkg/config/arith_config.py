# 算术配置参数

ARITH_CONFIG = {
    # 枚举与数值检查
    'enumeration_cap': 10 ** 7,  # 单位群 O^×/U^t 的最大枚举阶
    'embed_tolerance': 1e-9,  # 复嵌入比较容差
    'max_gauss_field': 10 ** 4,  # 有限域 Gauss 和的 q 上限

    # 约定开关
    'conventions': {
        # 'definitional' 有限和规范化；'lemma' 为 p=2 引理的规范化
        'p2_epsilon': 'definitional',
        # 加性特征标默认导子 −1（scale = 1/p）
        'additive_conductor': -1,
    },

    # p进预言机
    'padic': {
        'teichmuller_precision': 6,
        'gk_pi_digits': 20,
    },

    # 输出
    'output': {
        'default_format': 'json',
        'json_indent': 2,
    },
}
