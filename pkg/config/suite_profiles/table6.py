TABLE6_PROFILE = {
    "name": "table6",
    "display_name": "类型可能性表",
    "description": "穷举二面体数据，确认没有数据落入不可能的格子，并统计每格的见证数",

    "bounds": {
        "primes": [3, 5, 7],
        "max_p": 7,
        "max_level": 3,
        "kappa_sample": 60,
    },
    "seed": 0,
}
