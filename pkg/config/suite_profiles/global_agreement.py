GLOBAL_AGREEMENT_PROFILE = {
    "name": "global-agreement",
    "display_name": "全局导子",
    "description": "闭式乘积与逐素数乘积一致、无平方因子平凡特征时为 N³、∏ε_q = χ_p(M')",

    "bounds": {
        "primes": [2, 3, 5, 7, 11],
        "max_p": 11,
        "max_level": 3,
        "descriptors": 200,
        "squarefree": 30,
        "twist_checks": 50,
    },
    "seed": 20240601,
}
