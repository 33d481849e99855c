from decouple import config

# 0 lets batch evaluation pick the worker count itself
THREADS = config("PATHGAUGE_THREADS", default=0, cast=int)
PATH_CAP = config("PATHGAUGE_PATH_CAP", default=1_000_000, cast=int)
LOG_LEVEL = config("PATHGAUGE_LOG_LEVEL", default="WARNING")
REL_TOL = config("PATHGAUGE_REL_TOL", default=1e-9, cast=float)

# rows per worker below which batch evaluation stays serial
MIN_ROWS_PER_WORKER = config("PATHGAUGE_MIN_ROWS_PER_WORKER", default=256, cast=int)
