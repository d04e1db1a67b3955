DELIGNE_TWIST_PROFILE = {
    "name": "deligne-twist",
    "display_name": "Deligne 扭转定理",
    "description": "a(α) ≥ 2a(β) 时 β^{-1}(c)ε(α) 与定义式 ε(αβ) 逐一对照",

    "bounds": {
        "primes": [3, 5, 7],
        "max_p": 7,
        "max_level": 4,
        "alpha_sample": 12,  # 每个 (p, a(α)) 抽取的 α 个数
    },
    "seed": 0,
}
