# %% [markdown]
# # The ultrasound sweep
#
# With nothing in range the robot keeps driving. A reading under 30 cm
# starts a sweep: three 30 degree probes to the right, a swing back past
# the start, three probes to the left, and around again.

# %%
from waypath.avoidance import AvoidanceConfig, run_transcript

for line in run_transcript([25.0] * 8, AvoidanceConfig(cycle_limit=None)):
    print(line)

# %% [markdown]
# As soon as a probe reads clear the robot drives through the gap and then
# turns back toward the target.

# %%
for line in run_transcript([100.0, 25.0, 25.0, 200.0, 200.0]):
    print(line)

# %% [markdown]
# Surrounded on all sides, the sweep gives up after three full cycles.

# %%
print(run_transcript([10.0] * 30)[-1])
