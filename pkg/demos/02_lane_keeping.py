# %% [markdown]
# # Lane keeping on a rendered camera frame
#
# The simulator renders what a forward-pitched camera sees of two lane
# stripes. The vision pipeline finds edges, votes for lines, pairs them
# into a lane and reports the steering angle.

# %%
from pathlib import Path

from waypath.pgm import write_pgm
from waypath.sim import WorldState, lane_scenario, render_onboard
from waypath.vision import draw_overlay, process_frame

out = Path("demo_out")
out.mkdir(exist_ok=True)

for yaw in (0, 10, -10):
    scenario = lane_scenario(yaw_deg=yaw)
    frame = render_onboard(WorldState.initial(scenario), scenario)
    result = process_frame(frame)
    print(f"yaw {yaw:+3d} deg -> {len(result.lines)} lines, theta {result.theta:+.2f} deg")
    write_pgm(out / f"lane_yaw{yaw:+d}.pgm", draw_overlay(frame, result))

# %% [markdown]
# Yawing the robot to the left makes the road appear to lean right, and the
# pipeline asks for a right turn; the mirror case asks for a left turn.
# The overlays in demo_out/ show the detected lines and the midline.
