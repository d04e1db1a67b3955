GAUSS_PROFILE = {
    "name": "gauss",
    "display_name": "有限域 Gauss 和",
    "description": "|G|² = q、二次 Gauss 和的复嵌入、Davenport–Hasse 缺陷与 Stickelberger 预测",

    "bounds": {
        "max_p": 13,
        "max_level": 2,  # 这里指有限域次数 r
    },
    "seed": 0,
}
