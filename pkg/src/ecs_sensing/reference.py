"""Published QFI values used as comparison columns in ``table`` output."""

NBAR_GRID = (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)

# lossless, k = 10 (Table 1)
TABLE1 = {
    "k": 10.0,
    "loss": 0.0,
    "qfi": (5.78, 7.44, 9.05, 10.48, 12.36, 13.97, 16.05, 17.98, 20.54),
}

# R = 0.3, k = 2 (Table 2)
TABLE2 = {
    "k": 2.0,
    "loss": 0.3,
    "qfi": (2.92, 4.06, 5.11, 6.15, 7.21, 8.26, 9.36, 10.40, 11.50),
}

TABLES = {"table1": TABLE1, "table2": TABLE2}

REFERENCE_TOLERANCE = 0.05
