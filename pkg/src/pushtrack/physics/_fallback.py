"""Pure-Python planar pusher-slider kernel.

Reference implementation of the hot integration loop.  The compiled kernel
(pushtrack.physics._core) mirrors this code statement for statement; both
perform the same IEEE-754 double operations in the same order, so their
outputs are bit-identical.  Any change here must be made there as well.

The model: a disc pusher moves along a straight world-frame path and pushes
a rectangular slider quasi-statically.  Support friction is summarized by an
ellipsoidal limit surface whose force/torque ratio is the mean contact
radius; the applied contact force is confined to the friction cone of the
contact coefficient, which splits contacts into sticking and sliding.  The
slider stops the instant contact is lost, and object-obstacle penetration is
resolved by a minimal-translation projection.
"""

from __future__ import annotations

from math import cos, sin, sqrt

KIND = "pure"


def integrate_push(x, y, yaw, segs, mu, hx, hy, r_push, c2, obstacles):
    """Integrate pusher controls against a slider at planar pose (x, y, yaw).

    segs: (K, 6) rows of (px0, py0, vx, vy, duration, n_sub) pusher path
    segments, world frame, with the sub-step count n_sub fixed by the
    caller.  obstacles: (N, 7) rows of (cx, cy, ohx, ohy, cos_yaw, sin_yaw,
    radius) static rectangles with the trig precomputed by the caller.
    Returns the final (x, y, yaw); bit-exact inputs are returned when
    nothing ever touches the slider.
    """
    x = float(x)
    y = float(y)
    yaw = float(yaw)
    mu = float(mu)
    hx = float(hx)
    hy = float(hy)
    r_push = float(r_push)
    c2 = float(c2)
    r2 = r_push * r_push
    obj_rad = sqrt(hx * hx + hy * hy)
    n_obs = len(obstacles)

    for k in range(len(segs)):
        px0 = float(segs[k][0])
        py0 = float(segs[k][1])
        vx = float(segs[k][2])
        vy = float(segs[k][3])
        dur = float(segs[k][4])
        n = int(segs[k][5])
        if n < 1:
            n = 1
        dt = dur / n
        for i in range(n):
            t1 = (i + 1) * dt
            pushx = px0 + vx * t1
            pushy = py0 + vy * t1

            cy = cos(yaw)
            sy = sin(yaw)
            dxw = pushx - x
            dyw = pushy - y
            qbx = cy * dxw + sy * dyw
            qby = -sy * dxw + cy * dyw
            cpx = hx if qbx > hx else (-hx if qbx < -hx else qbx)
            cpy = hy if qby > hy else (-hy if qby < -hy else qby)
            ddx = qbx - cpx
            ddy = qby - cpy
            d2 = ddx * ddx + ddy * ddy

            if d2 < r2:
                vbx = cy * vx + sy * vy
                vby = -sy * vx + cy * vy
                if d2 > 0.0:
                    dist = sqrt(d2)
                    nox = ddx / dist
                    noy = ddy / dist
                else:
                    # pusher center on/inside the footprint: fall back to the
                    # motion direction for the outward normal
                    spd = sqrt(vbx * vbx + vby * vby)
                    if spd > 0.0:
                        nox = -vbx / spd
                        noy = -vby / spd
                    else:
                        nox = 1.0
                        noy = 0.0
                nix = -nox
                niy = -noy
                approach = vbx * nix + vby * niy
                if approach > 0.0:
                    rx = cpx
                    ry = cpy
                    a11 = 1.0 + ry * ry / c2
                    a12 = -rx * ry / c2
                    a22 = 1.0 + rx * rx / c2
                    det = 1.0 + (rx * rx + ry * ry) / c2
                    gx = (a22 * vbx - a12 * vby) / det
                    gy = (a11 * vby - a12 * vbx) / det
                    gn = gx * nix + gy * niy
                    tx = -niy
                    ty = nix
                    gt = gx * tx + gy * ty
                    wx = 0.0
                    wy = 0.0
                    om = 0.0
                    fabs_gt = -gt if gt < 0.0 else gt
                    if gn > 0.0 and fabs_gt <= mu * gn:
                        # sticking: contact point moves with the pusher
                        wx = gx
                        wy = gy
                        om = (rx * gy - ry * gx) / c2
                    else:
                        # sliding: force saturates on the friction-cone edge
                        s = 1.0 if gt > 0.0 else -1.0
                        fx = nix + s * mu * tx
                        fy = niy + s * mu * ty
                        uex = a11 * fx + a12 * fy
                        uey = a12 * fx + a22 * fy
                        denom = uex * nix + uey * niy
                        if denom > 1e-12:
                            k = approach / denom
                            wx = k * fx
                            wy = k * fy
                            om = k * (rx * fy - ry * fx) / c2
                    phi = om * dt
                    fabs_phi = -phi if phi < 0.0 else phi
                    if fabs_phi < 1e-10:
                        dbx = wx * dt
                        dby = wy * dt
                    else:
                        sp = sin(phi)
                        cp1 = 1.0 - cos(phi)
                        dbx = (sp * wx - cp1 * wy) * dt / phi
                        dby = (cp1 * wx + sp * wy) * dt / phi
                    x += cy * dbx - sy * dby
                    y += sy * dbx + cy * dby
                    yaw += phi

                # projection: keep the pusher disc outside the footprint
                cy = cos(yaw)
                sy = sin(yaw)
                dxw = pushx - x
                dyw = pushy - y
                qbx = cy * dxw + sy * dyw
                qby = -sy * dxw + cy * dyw
                cpx = hx if qbx > hx else (-hx if qbx < -hx else qbx)
                cpy = hy if qby > hy else (-hy if qby < -hy else qby)
                ddx = qbx - cpx
                ddy = qby - cpy
                d2 = ddx * ddx + ddy * ddy
                if d2 < r2:
                    if d2 > 0.0:
                        dist = sqrt(d2)
                        nox = ddx / dist
                        noy = ddy / dist
                        depth = r_push - dist
                    else:
                        spd = sqrt(vx * vx + vy * vy)
                        if spd > 0.0:
                            nwix = vx / spd
                            nwiy = vy / spd
                        else:
                            nwix = 1.0
                            nwiy = 0.0
                        x += nwix * r_push
                        y += nwiy * r_push
                        depth = 0.0
                        nox = 0.0
                        noy = 0.0
                    if depth > 0.0:
                        nwx = cy * nox - sy * noy
                        nwy = sy * nox + cy * noy
                        x -= depth * nwx
                        y -= depth * nwy

            if n_obs:
                cy = cos(yaw)
                sy = sin(yaw)
                for j in range(n_obs):
                    ocx = float(obstacles[j][0])
                    ocy = float(obstacles[j][1])
                    ohx = float(obstacles[j][2])
                    ohy = float(obstacles[j][3])
                    oc = float(obstacles[j][4])
                    os_ = float(obstacles[j][5])
                    orad = float(obstacles[j][6])
                    dcx = ocx - x
                    dcy = ocy - y
                    reach = obj_rad + orad
                    if dcx * dcx + dcy * dcy > reach * reach:
                        continue
                    # SAT over the four face axes of both rectangles
                    best = 1e300
                    bax = 0.0
                    bay = 0.0
                    bd = 0.0
                    separated = False
                    for ax, ay in ((cy, sy), (-sy, cy), (oc, os_), (-os_, oc)):
                        pa = cy * ax + sy * ay
                        pb = -sy * ax + cy * ay
                        ra = hx * (-pa if pa < 0.0 else pa) + hy * (-pb if pb < 0.0 else pb)
                        qa = oc * ax + os_ * ay
                        qb = -os_ * ax + oc * ay
                        rb = ohx * (-qa if qa < 0.0 else qa) + ohy * (-qb if qb < 0.0 else qb)
                        don = dcx * ax + dcy * ay
                        fdon = -don if don < 0.0 else don
                        overlap = ra + rb - fdon
                        if overlap <= 0.0:
                            separated = True
                            break
                        if overlap < best:
                            best = overlap
                            bax = ax
                            bay = ay
                            bd = don
                    if not separated:
                        sgn = 1.0 if bd >= 0.0 else -1.0
                        x -= sgn * best * bax
                        y -= sgn * best * bay

    return x, y, yaw
