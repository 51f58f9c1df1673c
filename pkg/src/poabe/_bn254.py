"""Low-level arithmetic for the alt_bn128 (BN254) pairing-friendly curve.

Optimal ate pairing over the 254-bit Barreto-Naehrig curve used by the
Ethereum precompiles:

    E / F_p    : y^2 = x^3 + 3            (group G1, cofactor 1)
    E'/ F_p^2  : y^2 = x^3 + 3/(9+i)      (sextic D-twist, hosts G2)

Tower: F_p2 = F_p[i]/(i^2+1), F_p6 = F_p2[tau]/(tau^3 - xi) with
xi = 9 + i, F_p12 = F_p6[w]/(w^2 - tau).

Representation conventions (shared with the go-ethereum bn256 lineage this
module derives from):

    fq    : python/gmpy2 integer in [0, p)
    fq2   : [x, y] meaning x*i + y
    fq6   : [x, y, z] meaning x*tau^2 + y*tau + z
    fq12  : [x, y] meaning x*w + y
    points: Jacobian [X, Y, Z]; line functions carry a cached T = Z^2 slot

Scalars are reduced mod the group order; field coefficients mod p.  All
functions are pure; values are plain lists and never mutated in place.
"""

from gmpy2 import mpz, invert

# y^2 = x^3 + 3, BN parameter u; p and order are the standard alt_bn128 values.
u = 4965661367192848881
p = mpz(21888242871839275222246405745257275088696311157297823662689037894645226208583)
order = mpz(21888242871839275222246405745257275088548364400416034343698204186575808495617)

curve_b = mpz(3)

# NAF digits of 6u+2, most significant last (ate loop count).
pseudo_binary_encoding = [0, 0, 0, 1, 0, 1, 0, -1, 0, 0, 1, -1, 0, 0, 1, 0,
                          0, 1, 1, 0, -1, 0, 0, 1, 0, -1, 0, 0, 0, 0, 1, 1,
                          1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1,
                          1, 0, 0, -1, 0, 0, 0, 1, 1, 0, -1, 0, 0, 1, 0, 1, 1]

# Frobenius/twist constants: powers of xi = 9+i used to untwist and to apply
# the p-power and p^2-power Frobenius maps on the tower.
xi_to_p_minus_1_over_6 = [mpz(16469823323077808223889137241176536799009286646108169935659301613961712198316),
                          mpz(8376118865763821496583973867626364092589906065868298776909617916018768340080)]
xi_to_p_minus_1_over_3 = [mpz(10307601595873709700152284273816112264069230130616436755625194854815875713954),
                          mpz(21575463638280843010398324269430826099269044274347216827212613867836435027261)]
xi_to_p_minus_1_over_2 = [mpz(3505843767911556378687030309984248845540243509899259641013678093033130930403),
                          mpz(2821565182194536844548159561693502659359617185244120367078079554186484126554)]
xi_to_p_sq_minus_1_over_3 = mpz(21888242871839275220042445260109153167277707414472061641714758635765020556616)
xi_to_2p_sq_minus_2_over_3 = mpz(2203960485148121921418603742825762020974279258880205651966)
xi_to_p_sq_minus_1_over_6 = mpz(21888242871839275220042445260109153167277707414472061641714758635765020556617)
xi_to_2p_minus_2_over_3 = [mpz(19937756971775647987995932169929341994314640652964949448313374472400716661030),
                           mpz(2581911344467009335267311115468803099551665605076196740867805258568234346338)]

twist_b = [mpz(266929791119991161246907387137283842545076965332900288569378510910307636690),
           mpz(19485874751759354771024239261021720505790618469301721065564631296452457478373)]

# Generators: G1 = (1, 2); G2 is the conventional alt_bn128 twist generator.
g1_gen = [mpz(1), mpz(2), mpz(1)]
g2_gen = [
    [mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634),
     mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781)],
    [mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531),
     mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930)],
    [mpz(0), mpz(1)],
]

# Number of Miller loops evaluated since import; tests use this to measure
# verification work in pairing units.
miller_count = 0


# ---------------------------------------------------------------------------
# F_p

def fq_inv(a):
    return invert(a, p)


def fq_neg(a):
    return -a % p


def fq_sqrt(a):
    # p = 3 mod 4
    r = pow(a, (p + 1) // 4, p)
    if r * r % p != a % p:
        return None
    return r


# ---------------------------------------------------------------------------
# F_p2

fq2_zero = [mpz(0), mpz(0)]
fq2_one = [mpz(0), mpz(1)]
fq2_i = [mpz(1), mpz(0)]


def fq2_is_zero(a):
    return a[0] == 0 and a[1] == 0


def fq2_is_one(a):
    return a[0] == 0 and a[1] == 1


def fq2_conj(a):
    return [-a[0] % p, a[1]]


def fq2_neg(a):
    return [-a[0] % p, -a[1] % p]


def fq2_add(a, b):
    return [(a[0] + b[0]) % p, (a[1] + b[1]) % p]


def fq2_sub(a, b):
    return [(a[0] - b[0]) % p, (a[1] - b[1]) % p]


def fq2_mul(a, b):
    # (xi+y)(x'i+y') = (xy'+x'y)i + (yy'-xx')
    return [(a[0] * b[1] + b[0] * a[1]) % p,
            (a[1] * b[1] - a[0] * b[0]) % p]


def fq2_mul_scalar(a, k):
    return [a[0] * k % p, a[1] * k % p]


def fq2_mul_xi(a):
    # multiply by xi = 9 + i
    return [(9 * a[0] + a[1]) % p, (9 * a[1] - a[0]) % p]


def fq2_square(a):
    # complex squaring
    return [2 * a[0] * a[1] % p,
            (a[1] - a[0]) * (a[1] + a[0]) % p]


def fq2_inv(a):
    t = invert(a[0] * a[0] + a[1] * a[1], p)
    return [-a[0] * t % p, a[1] * t % p]


def fq2_exp(a, k):
    result = fq2_one
    for i in range(k.bit_length() - 1, -1, -1):
        result = fq2_square(result)
        if (k >> i) & 1:
            result = fq2_mul(result, a)
    return result


def fq2_sqrt(a):
    # Adj & Rodriguez-Henriquez, alg. 9 (p = 3 mod 4)
    if fq2_is_zero(a):
        return [mpz(0), mpz(0)]
    a1 = fq2_exp(a, (p - 3) // 4)
    x0 = fq2_mul(a1, a)
    alpha = fq2_mul(a1, x0)
    if alpha == [mpz(0), p - 1]:
        x = fq2_mul(fq2_i, x0)
    else:
        b = fq2_exp(fq2_add(fq2_one, alpha), (p - 1) // 2)
        x = fq2_mul(b, x0)
    if fq2_square(x) != [a[0] % p, a[1] % p]:
        return None
    return x


# ---------------------------------------------------------------------------
# F_p6

fq6_zero = [fq2_zero, fq2_zero, fq2_zero]
fq6_one = [fq2_zero, fq2_zero, fq2_one]


def fq6_is_zero(a):
    return all(fq2_is_zero(c) for c in a)


def fq6_is_one(a):
    return fq2_is_zero(a[0]) and fq2_is_zero(a[1]) and fq2_is_one(a[2])


def fq6_neg(a):
    return [fq2_neg(a[0]), fq2_neg(a[1]), fq2_neg(a[2])]


def fq6_add(a, b):
    return [fq2_add(a[0], b[0]), fq2_add(a[1], b[1]), fq2_add(a[2], b[2])]


def fq6_sub(a, b):
    return [fq2_sub(a[0], b[0]), fq2_sub(a[1], b[1]), fq2_sub(a[2], b[2])]


def fq6_mul(a, b):
    v0 = fq2_mul(a[2], b[2])
    v1 = fq2_mul(a[1], b[1])
    v2 = fq2_mul(a[0], b[0])

    tz = fq2_mul(fq2_add(a[0], a[1]), fq2_add(b[0], b[1]))
    tz = fq2_sub(fq2_sub(tz, v1), v2)
    tz = fq2_add(fq2_mul_xi(tz), v0)

    ty = fq2_mul(fq2_add(a[1], a[2]), fq2_add(b[1], b[2]))
    ty = fq2_sub(fq2_sub(ty, v0), v1)
    ty = fq2_add(ty, fq2_mul_xi(v2))

    tx = fq2_mul(fq2_add(a[0], a[2]), fq2_add(b[0], b[2]))
    tx = fq2_add(fq2_sub(tx, v0), v1)
    tx = fq2_sub(tx, v2)
    return [tx, ty, tz]


def fq6_mul_fq2(a, k):
    return [fq2_mul(a[0], k), fq2_mul(a[1], k), fq2_mul(a[2], k)]


def fq6_mul_scalar(a, k):
    return [fq2_mul_scalar(a[0], k), fq2_mul_scalar(a[1], k), fq2_mul_scalar(a[2], k)]


def fq6_mul_tau(a):
    # multiply by tau: (x tau^2 + y tau + z) * tau = y tau^2 + z tau + xi*x
    return [a[1], a[2], fq2_mul_xi(a[0])]


def fq6_square(a):
    v0 = fq2_square(a[2])
    v1 = fq2_square(a[1])
    v2 = fq2_square(a[0])

    c0 = fq2_square(fq2_add(a[0], a[1]))
    c0 = fq2_add(fq2_mul_xi(fq2_sub(fq2_sub(c0, v1), v2)), v0)

    c1 = fq2_square(fq2_add(a[1], a[2]))
    c1 = fq2_add(fq2_sub(fq2_sub(c1, v0), v1), fq2_mul_xi(v2))

    c2 = fq2_square(fq2_add(a[0], a[2]))
    c2 = fq2_sub(fq2_add(fq2_sub(c2, v0), v1), v2)
    return [c2, c1, c0]


def fq6_inv(a):
    xx = fq2_square(a[0])
    yy = fq2_square(a[1])
    zz = fq2_square(a[2])

    xy = fq2_mul(a[0], a[1])
    xz = fq2_mul(a[0], a[2])
    yz = fq2_mul(a[1], a[2])

    ca = fq2_sub(zz, fq2_mul_xi(xy))
    cb = fq2_sub(fq2_mul_xi(xx), yz)
    cc = fq2_sub(yy, xz)

    f = fq2_mul_xi(fq2_mul(cc, a[1]))
    f = fq2_add(f, fq2_mul(ca, a[2]))
    f = fq2_add(f, fq2_mul_xi(fq2_mul(cb, a[0])))
    f = fq2_inv(f)
    return [fq2_mul(cc, f), fq2_mul(cb, f), fq2_mul(ca, f)]


def fq6_frobenius(a):
    x = fq2_mul(fq2_conj(a[0]), xi_to_2p_minus_2_over_3)
    y = fq2_mul(fq2_conj(a[1]), xi_to_p_minus_1_over_3)
    return [x, y, fq2_conj(a[2])]


def fq6_frobenius_p2(a):
    return [fq2_mul_scalar(a[0], xi_to_2p_sq_minus_2_over_3),
            fq2_mul_scalar(a[1], xi_to_p_sq_minus_1_over_3),
            a[2]]


# ---------------------------------------------------------------------------
# F_p12

fq12_zero = [fq6_zero, fq6_zero]
fq12_one = [fq6_zero, fq6_one]


def fq12_is_one(a):
    return fq6_is_zero(a[0]) and fq6_is_one(a[1])


def fq12_conj(a):
    return [fq6_neg(a[0]), a[1]]


def fq12_mul(a, b):
    tx = fq6_add(fq6_mul(a[0], b[1]), fq6_mul(a[1], b[0]))
    ty = fq6_add(fq6_mul(a[1], b[1]), fq6_mul_tau(fq6_mul(a[0], b[0])))
    return [tx, ty]


def fq12_square(a):
    v0 = fq6_mul(a[0], a[1])
    t = fq6_add(a[1], fq6_mul_tau(a[0]))
    ty = fq6_mul(fq6_add(a[0], a[1]), t)
    ty = fq6_sub(fq6_sub(ty, v0), fq6_mul_tau(v0))
    return [fq6_add(v0, v0), ty]


def fq12_inv(a):
    t = fq6_sub(fq6_square(a[1]), fq6_mul_tau(fq6_square(a[0])))
    t = fq6_inv(t)
    return [fq6_mul(fq6_neg(a[0]), t), fq6_mul(a[1], t)]


def fq12_exp(a, k):
    result = fq12_one
    for i in range(int(k).bit_length() - 1, -1, -1):
        result = fq12_square(result)
        if (k >> i) & 1:
            result = fq12_mul(result, a)
    return result


def fq12_frobenius(a):
    x = fq6_mul_fq2(fq6_frobenius(a[0]), xi_to_p_minus_1_over_6)
    return [x, fq6_frobenius(a[1])]


def fq12_frobenius_p2(a):
    x = fq6_mul_scalar(fq6_frobenius_p2(a[0]), xi_to_p_sq_minus_1_over_6)
    return [x, fq6_frobenius_p2(a[1])]


def fq12_in_gt(a):
    """Membership in the order-r subgroup of F_p12^*."""
    return fq12_is_one(fq12_exp(a, order))


# ---------------------------------------------------------------------------
# G1: curve over F_p, Jacobian coordinates

curve_inf = [mpz(0), mpz(1), mpz(0)]


def curve_is_inf(a):
    return a[2] == 0


def curve_neg(a):
    return [a[0], -a[1] % p, a[2]]


def curve_add(a, b):
    if curve_is_inf(a):
        return b
    if curve_is_inf(b):
        return a

    z1z1 = a[2] * a[2] % p
    z2z2 = b[2] * b[2] % p
    u1 = a[0] * z2z2 % p
    u2 = b[0] * z1z1 % p
    s1 = a[1] * b[2] * z2z2 % p
    s2 = b[1] * a[2] * z1z1 % p

    h = (u2 - u1) % p
    t = (s2 - s1) % p
    if h == 0 and t == 0:
        return curve_double(a)

    r = 2 * t % p
    i = 4 * h * h % p
    j = h * i % p
    v = u1 * i % p

    cx = (r * r - j - 2 * v) % p
    cy = (r * (v - cx) - 2 * s1 * j) % p
    cz = ((a[2] + b[2]) ** 2 - z1z1 - z2z2) * h % p
    return [cx, cy, cz]


def curve_double(a):
    A = a[0] * a[0] % p
    B = a[1] * a[1] % p
    C = B * B % p

    d = 2 * ((a[0] + B) ** 2 - A - C) % p
    e = 3 * A % p
    f = e * e % p

    cx = (f - 2 * d) % p
    cy = (e * (d - cx) - 8 * C) % p
    cz = 2 * a[1] * a[2] % p
    return [cx, cy, cz]


def curve_mul(a, k):
    k = int(k)
    if k == 0 or curve_is_inf(a):
        return curve_inf
    result = curve_inf
    for i in range(k.bit_length() - 1, -1, -1):
        result = curve_double(result)
        if (k >> i) & 1:
            result = curve_add(result, a)
    return result


def curve_affine(a):
    if curve_is_inf(a):
        return curve_inf
    if a[2] == 1:
        return a
    zinv = invert(a[2], p)
    zinv2 = zinv * zinv % p
    return [a[0] * zinv2 % p, a[1] * zinv2 * zinv % p, mpz(1)]


def curve_on_curve(a):
    a = curve_affine(a)
    if curve_is_inf(a):
        return True
    return (a[1] * a[1] - a[0] ** 3 - curve_b) % p == 0


def curve_eq(a, b):
    a = curve_affine(a)
    b = curve_affine(b)
    if curve_is_inf(a) or curve_is_inf(b):
        return curve_is_inf(a) and curve_is_inf(b)
    return a[0] == b[0] and a[1] == b[1]


# ---------------------------------------------------------------------------
# G2: twist over F_p2, Jacobian coordinates

twist_inf = [fq2_zero, fq2_one, fq2_zero]


def twist_is_inf(a):
    return fq2_is_zero(a[2])


def twist_neg(a):
    return [a[0], fq2_neg(a[1]), a[2]]


def twist_add(a, b):
    if twist_is_inf(a):
        return b
    if twist_is_inf(b):
        return a

    z1z1 = fq2_square(a[2])
    z2z2 = fq2_square(b[2])
    u1 = fq2_mul(a[0], z2z2)
    u2 = fq2_mul(b[0], z1z1)
    s1 = fq2_mul(a[1], fq2_mul(b[2], z2z2))
    s2 = fq2_mul(b[1], fq2_mul(a[2], z1z1))

    h = fq2_sub(u2, u1)
    t = fq2_sub(s2, s1)
    if fq2_is_zero(h) and fq2_is_zero(t):
        return twist_double(a)

    r = fq2_add(t, t)
    i = fq2_square(fq2_add(h, h))
    j = fq2_mul(h, i)
    v = fq2_mul(u1, i)

    cx = fq2_sub(fq2_sub(fq2_square(r), j), fq2_add(v, v))
    t4 = fq2_mul(s1, j)
    cy = fq2_sub(fq2_mul(r, fq2_sub(v, cx)), fq2_add(t4, t4))
    cz = fq2_mul(fq2_sub(fq2_sub(fq2_square(fq2_add(a[2], b[2])), z1z1), z2z2), h)
    return [cx, cy, cz]


def twist_double(a):
    A = fq2_square(a[0])
    B = fq2_square(a[1])
    C = fq2_square(B)

    d = fq2_sub(fq2_sub(fq2_square(fq2_add(a[0], B)), A), C)
    d = fq2_add(d, d)
    e = fq2_add(fq2_add(A, A), A)
    f = fq2_square(e)

    c8 = fq2_add(C, C)
    c8 = fq2_add(c8, c8)
    c8 = fq2_add(c8, c8)

    cx = fq2_sub(f, fq2_add(d, d))
    cy = fq2_sub(fq2_mul(e, fq2_sub(d, cx)), c8)
    cz = fq2_mul(a[1], a[2])
    cz = fq2_add(cz, cz)
    return [cx, cy, cz]


def twist_mul(a, k):
    k = int(k)
    if k == 0 or twist_is_inf(a):
        return twist_inf
    result = twist_inf
    for i in range(k.bit_length() - 1, -1, -1):
        result = twist_double(result)
        if (k >> i) & 1:
            result = twist_add(result, a)
    return result


def twist_affine(a):
    if twist_is_inf(a):
        return twist_inf
    if fq2_is_one(a[2]):
        return a
    zinv = fq2_inv(a[2])
    zinv2 = fq2_square(zinv)
    return [fq2_mul(a[0], zinv2), fq2_mul(a[1], fq2_mul(zinv2, zinv)), fq2_one]


def twist_on_curve(a):
    a = twist_affine(a)
    if twist_is_inf(a):
        return True
    y2 = fq2_square(a[1])
    x3 = fq2_mul(fq2_square(a[0]), a[0])
    return fq2_is_zero(fq2_sub(fq2_sub(y2, x3), twist_b))


def twist_in_subgroup(a):
    return twist_is_inf(twist_mul(a, order))


def twist_eq(a, b):
    a = twist_affine(a)
    b = twist_affine(b)
    if twist_is_inf(a) or twist_is_inf(b):
        return twist_is_inf(a) and twist_is_inf(b)
    return a[0] == b[0] and a[1] == b[1]


# ---------------------------------------------------------------------------
# Miller loop and final exponentiation

def _line_add(r, q, P, r2):
    # r, q on twist (r carries cached T = Z^2), P affine on curve
    B = fq2_mul(q[0], r[3])
    D = fq2_square(fq2_add(q[1], r[2]))
    D = fq2_mul(fq2_sub(fq2_sub(D, r2), r[3]), r[3])

    H = fq2_sub(B, r[0])
    I = fq2_square(H)
    E = fq2_add(I, I)
    E = fq2_add(E, E)
    J = fq2_mul(H, E)
    L1 = fq2_sub(fq2_sub(D, r[1]), r[1])
    V = fq2_mul(r[0], E)

    rx = fq2_sub(fq2_sub(fq2_square(L1), J), fq2_add(V, V))
    rz = fq2_sub(fq2_sub(fq2_square(fq2_add(r[2], H)), r[3]), I)
    t2 = fq2_mul(r[1], J)
    ry = fq2_sub(fq2_mul(fq2_sub(V, rx), L1), fq2_add(t2, t2))
    rt = fq2_square(rz)

    t = fq2_sub(fq2_sub(fq2_square(fq2_add(q[1], rz)), r2), rt)
    t2 = fq2_mul(L1, q[0])
    a = fq2_sub(fq2_add(t2, t2), t)

    c = fq2_mul_scalar(rz, P[1])
    c = fq2_add(c, c)

    b = fq2_mul_scalar(fq2_neg(L1), P[0])
    b = fq2_add(b, b)
    return a, b, c, [rx, ry, rz, rt]


def _line_double(r, P):
    A = fq2_square(r[0])
    B = fq2_square(r[1])
    C = fq2_square(B)

    D = fq2_sub(fq2_sub(fq2_square(fq2_add(r[0], B)), A), C)
    D = fq2_add(D, D)
    E = fq2_add(fq2_add(A, A), A)
    F = fq2_square(E)

    c8 = fq2_add(C, C)
    c8 = fq2_add(c8, c8)
    c8 = fq2_add(c8, c8)

    rx = fq2_sub(F, fq2_add(D, D))
    ry = fq2_sub(fq2_mul(E, fq2_sub(D, rx)), c8)
    rz = fq2_sub(fq2_sub(fq2_square(fq2_add(r[1], r[2])), B), r[3])

    a = fq2_square(fq2_add(r[0], E))
    b4 = fq2_add(B, B)
    b4 = fq2_add(b4, b4)
    a = fq2_sub(a, fq2_add(A, fq2_add(F, b4)))

    t = fq2_mul(E, r[3])
    t = fq2_add(t, t)
    b = fq2_mul_scalar(fq2_neg(t), P[0])

    c = fq2_mul(rz, r[3])
    c = fq2_add(c, c)
    c = fq2_mul_scalar(c, P[1])

    rt = fq2_square(rz)
    return a, b, c, [rx, ry, rz, rt]


def _mul_line(f, a, b, c):
    # sparse multiplication of f by the line (a*w*tau? layout per dclxvi)
    a2 = fq6_mul([fq2_zero, a, b], f[0])
    t3 = fq6_mul_fq2(f[1], c)
    t2 = [fq2_zero, a, fq2_add(b, c)]
    fx = fq6_mul(fq6_add(f[0], f[1]), t2)
    fx = fq6_sub(fq6_sub(fx, a2), t3)
    fy = fq6_add(t3, fq6_mul_tau(a2))
    return [fx, fy]


def miller(q, P):
    """Miller loop for the optimal ate pairing; q on the twist, P on the curve.

    Result still needs final_exponentiation.
    """
    global miller_count
    miller_count += 1

    Q = twist_affine(q)
    P = curve_affine(P)
    if twist_is_inf(Q) or curve_is_inf(P):
        return fq12_one

    mQ = twist_neg(Q)
    f = fq12_one
    r = [Q[0], Q[1], Q[2], fq2_one]
    r2 = fq2_square(Q[1])

    for i in range(len(pseudo_binary_encoding) - 1, 0, -1):
        a, b, c, r = _line_double(r, P)
        if i != len(pseudo_binary_encoding) - 1:
            f = fq12_square(f)
        f = _mul_line(f, a, b, c)

        s = pseudo_binary_encoding[i - 1]
        if s == 1:
            a, b, c, r = _line_add(r, Q, P, r2)
        elif s == -1:
            a, b, c, r = _line_add(r, mQ, P, r2)
        else:
            continue
        f = _mul_line(f, a, b, c)

    # untwisted Frobenius images pi(Q) and -pi^2(Q)
    q1 = [fq2_mul(fq2_conj(Q[0]), xi_to_p_minus_1_over_3),
          fq2_mul(fq2_conj(Q[1]), xi_to_p_minus_1_over_2),
          fq2_one, fq2_one]
    mq2 = [fq2_mul_scalar(Q[0], xi_to_p_sq_minus_1_over_3),
           Q[1],
           fq2_one, fq2_one]

    r2 = fq2_square(q1[1])
    a, b, c, r = _line_add(r, q1, P, r2)
    f = _mul_line(f, a, b, c)

    r2 = fq2_square(mq2[1])
    a, b, c, r = _line_add(r, mq2, P, r2)
    f = _mul_line(f, a, b, c)
    return f


def final_exponentiation(a):
    # Fuentes-Castaneda et al. hard-part schedule, as in go-ethereum bn256
    t1 = fq12_mul(fq12_conj(a), fq12_inv(a))
    t1 = fq12_mul(t1, fq12_frobenius_p2(t1))

    fp = fq12_frobenius(t1)
    fp2 = fq12_frobenius_p2(t1)
    fp3 = fq12_frobenius(fp2)

    fu = fq12_exp(t1, u)
    fu2 = fq12_exp(fu, u)
    fu3 = fq12_exp(fu2, u)

    y3 = fq12_conj(fq12_frobenius(fu))
    fu2p = fq12_frobenius(fu2)
    fu3p = fq12_frobenius(fu3)
    y2 = fq12_frobenius_p2(fu2)

    y0 = fq12_mul(fq12_mul(fp, fp2), fp3)
    y1 = fq12_conj(t1)
    y5 = fq12_conj(fu2)
    y4 = fq12_conj(fq12_mul(fu, fu2p))
    y6 = fq12_conj(fq12_mul(fu3, fu3p))

    t0 = fq12_mul(fq12_mul(fq12_square(y6), y4), y5)
    t1 = fq12_mul(fq12_mul(y3, y5), t0)
    t0 = fq12_mul(t0, y2)
    t1 = fq12_mul(fq12_square(t1), t0)
    t1 = fq12_square(t1)
    t0 = fq12_mul(t1, y1)
    t1 = fq12_mul(t1, y0)
    t0 = fq12_square(t0)
    return fq12_mul(t0, t1)


def pairing(q, P):
    """Full optimal ate pairing e: G2 x G1 -> GT."""
    return final_exponentiation(miller(q, P))


def multi_pairing(pairs):
    """Product of pairings e(q, P) over (q, P) pairs with one shared final exp."""
    f = fq12_one
    for q, P in pairs:
        f = fq12_mul(f, miller(q, P))
    return final_exponentiation(f)
