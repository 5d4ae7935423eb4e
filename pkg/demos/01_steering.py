# %% [markdown]
# # Turning a midline into a steering command
#
# The camera sees a lane midline as two image points. Its lean away from
# vertical is the turn angle, and a fixed turn rate converts that angle
# into how long to spin the wheels.

# %%
from waypath.geometry import ImagePoint, new_history, steer_from_theta, theta_fifo_push, theta_multi, theta_single

top, bottom = ImagePoint(120, 100), ImagePoint(100, 200)
theta = theta_single(top, bottom)
print(f"single-frame theta: {theta:+.3f} deg")

# %% [markdown]
# Positive means the midline leans right, so the robot turns right.
# At 23 degrees per second the command is a timed spin.

# %%
cmd = steer_from_theta(theta)
print(cmd.direction.value, f"{cmd.duration_s:.4f} s")

# %% [markdown]
# With a short history of midlines the angle can come from two frames
# instead: how far the top of the midline drifted since the last one.

# %%
history = new_history()
for obs in [(ImagePoint(100, 50), ImagePoint(100, 200)), (ImagePoint(130, 55), ImagePoint(102, 200))]:
    history = theta_fifo_push(history, obs)
(prev_top, prev_bottom), (curr_top, _) = history
print(f"two-frame theta: {theta_multi(prev_top, prev_bottom, curr_top):+.3f} deg")
