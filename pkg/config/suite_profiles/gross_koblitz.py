GROSS_KOBLITZ_PROFILE = {
    "name": "gross-koblitz",
    "display_name": "Gross–Koblitz 预言机",
    "description": "Gauss 和与 π^a·Γ_p(a/(p−1)) 的 π 进缺陷，以及 Γ_p(1+x)/Γ_p(x) = −x",

    "bounds": {
        "primes": [5, 7],
        "max_p": 7,
        "max_level": 3,  # Γ_p 递推检查的模 p^t
        "pi_digits": 20,
        "defect_ratio": 0.6,
        "gamma_primes": [3, 5, 7],
    },
    "seed": 0,
}
