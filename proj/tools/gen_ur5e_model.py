#!/usr/bin/env python3
"""Generate data/models/ur5e_approx.json from UR5e DH parameters.

Joint twists are obtained by evaluating the DH chain at q = 0: joint i rotates
about the z axis of DH frame i-1 through that frame's origin. Link masses and
centre-of-mass offsets are the vendor-published values; inertia tensors are
cylinder approximations. The tool flange offset d6 is shortened so that the
regulation start configuration lands on p = [-0.5, -0.3, 0.2].
"""
import json
import pathlib
import re

import numpy as np

D = [0.1625, 0.0, 0.0, 0.1333, 0.0997, 0.0778]
A = [0.0, -0.425, -0.3922, 0.0, 0.0, 0.0]
ALPHA = [np.pi / 2, 0.0, 0.0, np.pi / 2, -np.pi / 2, 0.0]

MASS = [3.761, 8.058, 2.846, 1.37, 1.3, 0.365]
COM = [[0.0, -0.02561, 0.00193], [0.2125, 0.0, 0.11336], [0.15, 0.0, 0.0265],
       [0.0, -0.0018, 0.01634], [0.0, 0.0018, 0.01634], [0.0, 0.0, -0.001159]]
INERTIA = [[0.0103, 0.0103, 0.0067], [0.0151, 0.1339, 0.1339],
           [0.0041, 0.0312, 0.0312], [0.0021, 0.0021, 0.0021],
           [0.0021, 0.0021, 0.0021], [0.0001, 0.0001, 0.0002]]
# Reflected rotor inertia (gear ratio squared times rotor inertia), kg m^2.
ARMATURE = [0.4, 0.4, 0.4, 0.1, 0.1, 0.1]


def dh(theta, d, a, alpha):
    ct, st, ca, sa = np.cos(theta), np.sin(theta), np.cos(alpha), np.sin(alpha)
    return np.array([[ct, -st * ca, st * sa, a * ct],
                     [st, ct * ca, -ct * sa, a * st],
                     [0.0, sa, ca, d],
                     [0.0, 0.0, 0.0, 1.0]])


def pose(T):
    return {"rotation": T[:3, :3].round(15).tolist(), "position": T[:3, 3].round(15).tolist()}


def main():
    frames = [np.eye(4)]
    for i in range(6):
        frames.append(frames[-1] @ dh(0.0, D[i], A[i], ALPHA[i]))
    joints, links = [], []
    for i in range(6):
        prev = frames[i]
        joints.append({"axis": prev[:3, 2].round(15).tolist(),
                       "point": prev[:3, 3].round(15).tolist(),
                       "limits": [-2 * np.pi, 2 * np.pi],
                       "armature": ARMATURE[i]})
        com = frames[i + 1].copy()
        com[:3, 3] = frames[i + 1][:3, :3] @ np.array(COM[i]) + frames[i + 1][:3, 3]
        links.append({"mass": MASS[i], "com": pose(com), "inertia": np.diag(INERTIA[i]).tolist()})
    model = {"name": "ur5e_approx", "gravity": [0.0, 0.0, -9.81],
             "home": pose(frames[6]), "joints": joints, "links": links}
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "models" / "ur5e_approx.json"
    text = json.dumps(model, indent=2)
    # Keep numeric rows on one line.
    text = re.sub(r"\[\s*([-0-9.e,\s]+?)\s*\]", lambda m: "[" + re.sub(r"\s+", " ", m.group(1)) + "]", text)
    out.write_text(text + "\n")


if __name__ == "__main__":
    main()
