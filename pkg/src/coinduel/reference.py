"""Published reference values used by the verification suites."""

# N(10^-k, 2 * 10^-k)
PUBLISHED_N = {
    5: 72768,
    10: 7276890317,
    15: 727689031794675,
    20: 72768903179467598852,
    25: 7276890317946759885295987,
    30: 727689031794675988529598753552,
    100: int(
        "72768" "90317" "94675" "98852" "95987" "53552" "38752" "84521" "10838" "88022"
        "00705" "28794" "63897" "19626" "49789" "77512" "24788" "32188" "39061" "36928"
    ),
}

# the standard worked example
WORKED_EXAMPLE = {"q": "0.18", "p": "0.2", "N": 26, "f1": "18/125"}

# area constants
SIMPLE_AGREEMENT_AREA = 0.4674011002723395  # pi^2/4 - 2
COMBINED_AGREEMENT_AREA = 0.60
LOWER_BOUND_EXACT_AREA = 0.87
