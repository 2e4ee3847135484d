#!/usr/bin/env python3
# Copyright 2026 The elidar Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes data/demo_scene.cfg: a plaza with two mast LiDARs and 18 actors.

Vehicles keep to their own angular sectors and pedestrians to their own
bearings, so no actor shadows another from the central mast pair.
"""
import math
import sys

LICENSE = """\
# Copyright 2026 The elidar Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""

VEHICLES = [("car", 0.6), ("bus", 0.7), ("suv", 0.55),
            ("truck", 0.65), ("car", 0.6), ("suv", 0.55)]
# (subtype, gait); children are ids 8, 15 and 18.
PEDESTRIANS = [("adult", "walking"), ("adult", "walking"), ("adult", "running"),
               ("adult", "walking"), ("child", "running"), ("adult", "walking"),
               ("adult", "walking"), ("adult", "running"), ("adult", "walking"),
               ("child", "walking"), ("adult", "walking"), ("child", "running")]
SPEED = {"walking": 1.3, "running": 2.4}
VEH_SECTOR = 44.0
PED_SLOT = 8.0
MAST_HEIGHT = 8.0
VEH_DIST = {"car": 15.0, "suv": 15.0, "truck": 18.0, "bus": 20.0}
DIMS_L = {"car": 4.5, "suv": 4.8, "truck": 8.0, "bus": 12.0}


def wrap(deg):
    return (deg + 180.0) % 360.0 - 180.0


def main(path):
    out = LICENSE.splitlines() + [
        "",
        "# Plaza observed by two mast-mounted LiDARs, units: m, s, degrees.",
        "# Actors keep to distinct bearings from the plaza center.",
        "# Regenerate with tools/make_demo_scene.py.",
        "name demo_plaza",
        "duration 10",
        "frame_rate 10",
        "seed 20240917",
        "ground_reflectivity 0.25",
        "",
    ]
    # Each vehicle drives a chord inside its own 44-degree sector; pedestrians
    # walk radially in 8-degree slots between sectors.
    bearing = 0.0
    ped = iter(PEDESTRIANS)
    oid = 1
    for i, (subtype, refl) in enumerate(VEHICLES):
        mid = math.radians(bearing + VEH_SECTOR / 2.0)
        dist = VEH_DIST[subtype]
        half_chord = dist * math.tan(math.radians(VEH_SECTOR / 2.0))
        travel = half_chord - DIMS_L[subtype] / 2.0 - 0.5
        sign = 1.0 if i % 2 == 0 else -1.0
        tangent = mid + math.pi / 2.0
        cx, cy = dist * math.cos(mid), dist * math.sin(mid)
        yaw = math.degrees(tangent) if sign > 0 else math.degrees(tangent) + 180.0
        out += ["object {", f"id {oid}", f"subtype {subtype}", f"reflectivity {refl}"]
        for t, s in ((0, -travel * sign), (10, travel * sign)):
            x = cx + s * math.cos(tangent)
            y = cy + s * math.sin(tangent)
            out.append(f"keyframe {t} {x:.3f} {y:.3f} 0 {wrap(yaw):.1f}")
        out += ["}", ""]
        oid += 1
        bearing += VEH_SECTOR
        for k in range(2):
            subtype_p, gait = next(ped)
            th = math.radians(bearing + PED_SLOT / 2.0)
            r0, r1 = 8.0, min(8.0 + SPEED[gait] * 10.0, 24.0)
            outward = (oid % 2) == 0
            if not outward:
                r0, r1 = r1, r0
            yaw = math.degrees(th) + (0.0 if outward else 180.0)
            out += ["object {", f"id {oid}", f"subtype {subtype_p}",
                    "reflectivity 0.4", f"gait {gait}"]
            for t, r in ((0, r0), (10, r1)):
                out.append(f"keyframe {t} {r * math.cos(th):.3f} {r * math.sin(th):.3f} 0 {wrap(yaw):.1f}")
            out += ["}", ""]
            oid += 1
            bearing += PED_SLOT
    for sid, x in ((1, -1.5), (2, 1.5)):
        out += [
            "sensor {",
            f"id {sid}",
            f"position {x:g} 0 {MAST_HEIGHT:g}",
            f"yaw {0 if sid == 1 else 180}",
            "pitch 0",
            "channels 64 -45 0",
            "azimuth_steps 1024",
            "max_range 120",
            "range_noise 0.02",
            "dropout 0.02",
            "intensity_exponent 0",
            "}",
            "",
            "# mast under the sensor",
            "prop {",
            "reflectivity 0.35",
            f"box {x - 0.15:g} -0.15 0 {x + 0.15:g} 0.15 {MAST_HEIGHT - 0.5:g}",
            "}",
            "",
        ]
    with open(path, "w") as f:
        f.write("\n".join(out))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/demo_scene.cfg")
