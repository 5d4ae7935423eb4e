# %% [markdown]
# # Straight-line bearing versus grid search
#
# When the workstation can see both robot and target, a single bearing is
# enough. A grid planner has to expand thousands of cells to learn the same
# thing on an open floor. Operation counts make the gap reproducible;
# wall times are shown but vary by machine.

# %%
from waypath.pathfind import OccupancyGrid, compare_planners

report = compare_planners(OccupancyGrid(100, 100, 1.0), (0, 0), (99, 99), trials=20)
print(report.table())

# %% [markdown]
# Obstacles change the picture: the grid planner routes around them,
# while the bearing alone would drive straight into them. That is why the
# robot pairs the bearing with an onboard avoidance routine.

# %%
cluttered = OccupancyGrid.random(60, 60, 0.3, seed=4, keep_free=((0, 0), (59, 59)))
report = compare_planners(cluttered, (0, 0), (59, 59), trials=5)
print(report.table())
