EPSILON_PROPS_PROFILE = {
    "name": "epsilon-props",
    "display_name": "ε 因子性质",
    "description": "c 的单位无关性、(ε1)(ε2)、奇素数二次特征标的闭式值、p=2 的 τ 测试向量",

    "bounds": {
        "primes": [3, 5, 7],
        "max_p": 7,
        "max_level": 2,
        "random_units": 3,
    },
    "seed": 0,
}
