#include "nikstar/counting.hpp"

#include "nikstar/errors.hpp"

#include <sstream>

namespace nikstar::counting {

SystemShape::SystemShape(int p_) : p(p_) {
    if (p < 2) throw InputError("p must be at least 2, got " + std::to_string(p));
}

long floor_div(long num, long den) {
    long q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

long ceil_div(long num, long den) { return -floor_div(-num, den); }

long mod(long x, long m) {
    long r = x % m;
    return r < 0 ? r + m : r;
}

int residue_ell(long n, const SystemShape& shape) {
    return static_cast<int>(mod(n, shape.p + 1));
}

IndexPair index_pair(long rho, const SystemShape& shape) {
    const int p = shape.p;
    const long r = mod(rho, shape.period());
    IndexPair out{static_cast<int>(r), static_cast<int>(mod(r + 1, p + 1)),
                  static_cast<int>(mod(r, p)) + 1};
    return out;
}

ExponentRange orthogonality_range(long n, int j, const SystemShape& shape) {
    const long p = shape.p;
    const long ell = residue_ell(n, shape);
    return {ceil_div(ell - j, p + 1), floor_div(n + p * ell - 1 - j * (p + 1), p * (p + 1))};
}

long count_Mj(long n, int j, const SystemShape& shape) {
    return orthogonality_range(n, j, shape).count();
}

long Z(long n, int k, const SystemShape& shape) {
    long total = 0;
    for (int j = k; j <= shape.p - 1; ++j) total += count_Mj(n, j, shape);
    return total;
}

int Lambda(long n, int k, const SystemShape& shape) {
    return static_cast<int>(Z(n + shape.p + 1, k, shape) - Z(n, k, shape));
}

int Lambda_closed_form(long n, int k, const SystemShape& shape) {
    return mod(n, shape.p) < k ? 0 : 1;
}

int theta(long n, int k, const SystemShape& shape) {
    const int ell = residue_ell(n, shape);
    if (ell == shape.p) return 1;
    if (ell < k) return 1;
    if (ell > k) return 0;
    return (k % 2 != 0) ? 1 : 0;
}

int epsilon(long rho, int k, const SystemShape& shape) {
    const long r = mod(rho, shape.period());
    const int kk = 2 * static_cast<int>(ceil_div(k - 1, 2));
    const long e = Z(r + 1, kk, shape) - Z(r, kk, shape) + theta(r, k - 1, shape);
    return mod(e, 2) == 0 ? 1 : -1;
}

int sign_phi_at_infinity(int k, int l, const SystemShape& shape) {
    (void)shape;
    if (l % 2 != 0) return k <= l ? 1 : -1;
    return k < l ? 1 : -1;
}

int sign_f_product(int k, int l, const SystemShape& shape) {
    const int p = shape.p;
    if (k <= l - 1) return ((p + 1) % 2 == 0) ? 1 : -1;
    return ((p + k) % 2 == 0) ? 1 : -1;
}

namespace {

class Collector {
public:
    explicit Collector(int p) : p_(p) {}
    void expect(bool ok, const char* identity, long n, int k, const std::string& detail = {}) {
        if (!ok) out.push_back({identity, p_, n, k, detail});
    }
    std::vector<Witness> out;

private:
    int p_;
};

std::string pair_str(long a, long b) {
    std::ostringstream os;
    os << "got " << a << ", expected " << b;
    return os.str();
}

}  // namespace

std::vector<Witness> verify_identities(int p, int periods, const LambdaFormula& closed_form) {
    const SystemShape shape(p);
    const long T = shape.period();
    const long n_max = periods * T;
    Collector c(p);

    for (long n = 0; n <= n_max; ++n) {
        c.expect(Z(n, 0, shape) == floor_div(n, p + 1), "Z(n,0)=floor(n/(p+1))", n, 0,
                 pair_str(Z(n, 0, shape), floor_div(n, p + 1)));
        c.expect(Z(n, p, shape) == 0, "Z(n,p)=0", n, p);

        for (int j = 0; j < p; ++j) {
            // Brute-force enumeration of admissible exponents.
            const long ell = residue_ell(n, shape);
            long brute = 0;
            for (long s = -2 * (n + 2); s <= 2 * (n + 2); ++s) {
                const bool lower = s * (p + 1) >= ell - j;
                const bool upper = s * static_cast<long>(p) * (p + 1) <= n + p * ell - 1 - j * (p + 1);
                if (lower && upper) ++brute;
            }
            c.expect(brute == count_Mj(n, j, shape), "M_j by enumeration", n, j,
                     pair_str(count_Mj(n, j, shape), brute));
        }

        for (int k = 0; k <= p; ++k) {
            const int lam = Lambda(n, k, shape);
            c.expect(lam == closed_form(n, k, shape), "Lambda closed form", n, k,
                     pair_str(lam, closed_form(n, k, shape)));
            long alt = 0;
            for (int j = 0; j <= p; ++j) alt += Z(n + j + 1, k, shape) - Z(n + j, k, shape);
            c.expect(alt == lam, "Lambda telescoped form", n, k, pair_str(alt, lam));

            const long inc = Z(n + 1, k, shape) - Z(n, k, shape);
            c.expect(inc >= -1 && inc <= 1, "Z increment in {-1,0,1}", n, k, std::to_string(inc));
            const long inc_shift = Z(n + T + 1, k, shape) - Z(n + T, k, shape);
            c.expect(inc == inc_shift, "Z increment periodic", n, k, pair_str(inc_shift, inc));
        }
        for (int k = 0; k <= p - 1; ++k) {
            c.expect(theta(n, k, shape) == theta(n + p + 1, k, shape), "theta periodic", n, k);
        }
    }

    for (int k = 1; k <= p; ++k) {
        int sum = 0;
        for (int n = 0; n <= p; ++n) sum += theta(n, k - 1, shape);
        c.expect(sum % 2 == 1, "sum of theta odd", 0, k, std::to_string(sum));
        c.expect(sum == (k % 2 == 1 ? k : k + 1), "sum of theta value", 0, k, std::to_string(sum));
    }

    for (int k = 0; k <= p - 1; ++k) {
        for (int l = 1; l <= p; ++l) {
            int prod = 1;
            for (int nu = k + 1; nu <= p; ++nu) prod *= sign_phi_at_infinity(nu, l, shape);
            c.expect(prod == sign_f_product(k, l, shape), "sign of f product", l, k);
        }
    }

    for (long rho = 0; rho <= n_max; ++rho) {
        const IndexPair ip = index_pair(rho, shape);
        c.expect(mod(rho - (ip.k - 1), p + 1) == 0 && mod(rho - (ip.l - 1), p) == 0,
                 "index pair congruences", rho, ip.k);
        int matches = 0;
        for (int k = 0; k <= p; ++k)
            for (int l = 1; l <= p; ++l)
                if (mod(rho - (k - 1), p + 1) == 0 && mod(rho - (l - 1), p) == 0) ++matches;
        c.expect(matches == 1, "index pair unique", rho, ip.k, std::to_string(matches));

        c.expect(epsilon(rho, 1, shape) == 1, "epsilon_1 = 1", rho, 1);
        int running = 1;
        for (int k = 1; k <= p; ++k) {
            running *= epsilon(rho, k, shape);
            const int expected = (k % 2 == 1) ? 1 : epsilon(rho, k, shape);
            c.expect(running == expected, "prod of epsilon_j", rho, k);

            // sg(phi_k^{(l)}(inf)) * prod_{j=0}^{p} eps_k^{(rho-p+j)} = 1
            int prod = sign_phi_at_infinity(k, ip.l, shape);
            for (int j = 0; j <= p; ++j) prod *= epsilon(rho - p + j, k, shape);
            c.expect(prod == 1, "epsilon product against sign table", rho, k);
        }
    }
    return std::move(c.out);
}

}  // namespace nikstar::counting
