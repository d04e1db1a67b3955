VARIANCE_CLOSED_FORMS_PROFILE = {
    "name": "variance-closed-forms",
    "display_name": "方差数闭式",
    "description": "定义式 ε_p 与特殊型、主序列、超尖点各行闭式（或 Gauss 和比值）的精确对照",

    "bounds": {
        "primes": [2, 3, 5, 7],
        "max_p": 7,
        "max_level": 3,
        "p2_level": 5,
        "max_weight": 12,
        "kappa_sample": 12,
        "pi_digits": 20,
    },
    "seed": 0,
}
