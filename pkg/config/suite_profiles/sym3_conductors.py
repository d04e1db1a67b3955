SYM3_CONDUCTORS_PROFILE = {
    "name": "sym3-conductors",
    "display_name": "sym³ 局部导子",
    "description": "一般机制（V^I 记账与诱导导子）与各类型闭式的对照",

    "bounds": {
        "primes": [3, 5, 7],
        "max_p": 7,
        "max_level": 3,  # a(κ) 上限
        "principal_level": 4,
        "p2_kappa_level": 4,
        "max_weight": 12,
        "kappa_sample": 30,  # 每个 (K, a(κ)) 抽取的 κ 个数
    },
    "seed": 0,
}
