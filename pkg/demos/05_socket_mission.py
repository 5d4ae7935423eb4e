# %% [markdown]
# # A full mission over the wire
#
# The workstation locates robot and target in an overhead image, sends one
# THETA line, and from then on the robot is on its own: it turns, drives,
# avoids the obstacle in its way and reports back when it arrives.

# %%
from pathlib import Path

from waypath.net import loopback_mission
from waypath.plot import mission_svg
from waypath.sim import min_clearance, straight_scenario

scenario = straight_scenario(obstacle_radius=20.0)
session, robot = loopback_mission(scenario)
for line in session.transcript:
    print("workstation", line)

# %% [markdown]
# The robot's own log holds the avoidance decisions and the trajectory.

# %%
mission = robot.mission
print(mission.transcript_text())
print(f"{mission.outcome.value}: {mission.path_length_cm:.1f} cm driven, "
      f"closest approach to the obstacle {min_clearance(mission.trajectory, scenario):.2f} cm")

out = Path("demo_out")
out.mkdir(exist_ok=True)
(out / "mission.svg").write_text(mission_svg(scenario, mission.trajectory))
