CONDUCTOR_POWERS_PROFILE = {
    "name": "conductor-powers",
    "display_name": "特征标幂的导子",
    "description": "Q_p 上 a(χ³)、Q_2 上 a(χ²) 的闭式与穷举对照，以及 Q_3 二次扩张上的 f_χ 分支",

    "bounds": {
        "primes": [3, 5, 7],
        "max_p": 7,
        "max_level": 5,
        "p2_max_level": 6,  # (Z/2^t)^×
        "extension_p": 3,
        "extension_level": 3,
    },
    "seed": 0,
}
