# cython: language_level=3
"""Compiled planar pusher-slider kernel.

Statement-for-statement mirror of pushtrack.physics._fallback; see that
module for the model description.  The build pins -ffp-contract=off and
both modules call the same libm, so compiled and pure outputs are
bit-identical.  Any change here must be made there as well.
"""

from libc.math cimport cos, sin, sqrt

KIND = "compiled"


def integrate_push(double x, double y, double yaw, double[:, ::1] segs,
                   double mu, double hx, double hy, double r_push,
                   double c2, double[:, ::1] obstacles):
    """Integrate pusher controls against a slider at planar pose (x, y, yaw).

    Arguments and return match _fallback.integrate_push.
    """
    cdef double r2 = r_push * r_push
    cdef double obj_rad = sqrt(hx * hx + hy * hy)
    cdef Py_ssize_t n_obs = obstacles.shape[0]
    cdef Py_ssize_t n_segs = segs.shape[0]

    cdef Py_ssize_t k, i, j, a
    cdef long long n
    cdef double px0, py0, vx, vy, dur, dt, t1, pushx, pushy
    cdef double cy, sy, dxw, dyw, qbx, qby, cpx, cpy, ddx, ddy, d2
    cdef double vbx, vby, dist, nox, noy, spd, nix, niy, approach
    cdef double rx, ry, a11, a12, a22, det, gx, gy, gn, tx, ty, gt
    cdef double wx, wy, om, fabs_gt, s, fx, fy, uex, uey, denom, kk
    cdef double phi, fabs_phi, sp, cp1, dbx, dby
    cdef double depth, nwx, nwy, nwix, nwiy
    cdef double ocx, ocy, ohx, ohy, oc, os_, orad, dcx, dcy, reach
    cdef double best, bax, bay, bd, ax, ay, pa, pb, ra, qa, qb, rb
    cdef double don, fdon, overlap, sgn
    cdef double axs[4][2]
    cdef bint separated

    with nogil:
        for k in range(n_segs):
            px0 = segs[k, 0]
            py0 = segs[k, 1]
            vx = segs[k, 2]
            vy = segs[k, 3]
            dur = segs[k, 4]
            n = <long long> segs[k, 5]
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
                            wx = gx
                            wy = gy
                            om = (rx * gy - ry * gx) / c2
                        else:
                            s = 1.0 if gt > 0.0 else -1.0
                            fx = nix + s * mu * tx
                            fy = niy + s * mu * ty
                            uex = a11 * fx + a12 * fy
                            uey = a12 * fx + a22 * fy
                            denom = uex * nix + uey * niy
                            if denom > 1e-12:
                                kk = approach / denom
                                wx = kk * fx
                                wy = kk * fy
                                om = kk * (rx * fy - ry * fx) / c2
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
                        ocx = obstacles[j, 0]
                        ocy = obstacles[j, 1]
                        ohx = obstacles[j, 2]
                        ohy = obstacles[j, 3]
                        oc = obstacles[j, 4]
                        os_ = obstacles[j, 5]
                        orad = obstacles[j, 6]
                        dcx = ocx - x
                        dcy = ocy - y
                        reach = obj_rad + orad
                        if dcx * dcx + dcy * dcy > reach * reach:
                            continue
                        best = 1e300
                        bax = 0.0
                        bay = 0.0
                        bd = 0.0
                        separated = False
                        axs[0][0] = cy
                        axs[0][1] = sy
                        axs[1][0] = -sy
                        axs[1][1] = cy
                        axs[2][0] = oc
                        axs[2][1] = os_
                        axs[3][0] = -os_
                        axs[3][1] = oc
                        for a in range(4):
                            ax = axs[a][0]
                            ay = axs[a][1]
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
