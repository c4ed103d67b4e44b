"""3000 households behind a 10 Gb/s node, SFM-IX packet sizes, published SFM-IX map."""
from qenvelope import PAPER_MODELS, AggregationScenario, builtin, dimension_delay

scenario = AggregationScenario(n_users=3000, user_mean_bps=1e6, user_sd_bps=0.8e6, capacity_bps=10e9)
report = dimension_delay(scenario, PAPER_MODELS["paper-sfmix"], builtin("sfmix"), [0.9, 0.99, 0.999])
print(report.table())
