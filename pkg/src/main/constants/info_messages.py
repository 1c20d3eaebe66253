PROGRAM_SOLVED = "Program solved"
INACCURATE_SOLUTION_ACCEPTED = "Backend reported an inaccurate optimum; residual within tolerance"
SCAN_STARTED = "Starting k scan"
SCAN_FINISHED = "k scan finished"
MONOTONICITY_DRIFT = "Success probability decreased between consecutive k"
