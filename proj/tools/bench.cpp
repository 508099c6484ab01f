// Benchmark comparing the OpenMP kernels against the serial reference:
// Schouten brackets over large necklace sums and a bounded-family torsion
// sweep. Results from both paths are checked for equality before timing is
// reported.

#include "ncpn/builtins.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <iostream>
#include <random>

using namespace ncpn;
using namespace ncpn::builtins;

namespace {

double ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

PolyVector random_polyvector(const Quiver& q, int grade, int terms, int maxlen,
                             std::mt19937_64& rng) {
    PolyVector v(q, grade);
    int added = 0;
    auto pick = [&](int n) { return (int)(rng() % (uint64_t)n); };
    while (added < terms) {
        int len = grade + pick(maxlen - grade + 1);
        std::vector<Sym> syms;
        int need = -1;
        bool ok = true;
        int partials = 0;
        for (int i = 0; i < len; ++i) {
            std::vector<Sym> cands;
            for (int a = 0; a < q.arrow_count(); ++a) {
                Sym s = q.arrow_sym(a);
                if (need < 0 || q.sym_head(s) == need) cands.push_back(s);
                Sym p = q.partial_sym(a);
                if (partials < grade && (need < 0 || q.sym_head(p) == need)) cands.push_back(p);
            }
            if (cands.empty()) {
                ok = false;
                break;
            }
            Sym s = cands[(size_t)pick((int)cands.size())];
            if (s.kind == SymKind::Partial) ++partials;
            syms.push_back(s);
            need = q.sym_tail(s);
        }
        if (!ok || partials != grade) continue;
        auto w = make_word(q, syms);
        if (!w || !word_closed(q, *w)) continue;
        v.add_word(*w, rat(1 + pick(5), 1 + pick(3)));
        ++added;
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    int terms = argc > 1 ? std::atoi(argv[1]) : 60;
    int maxlen = argc > 2 ? std::atoi(argv[2]) : 8;
#ifdef _OPENMP
    std::cout << "openmp threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "openmp: disabled at build time\n";
#endif

    const Quiver& q = gh_quiver();
    std::mt19937_64 rng(123);
    PolyVector a = random_polyvector(q, 2, terms, maxlen, rng);
    PolyVector b = random_polyvector(q, 2, terms, maxlen, rng);
    std::cout << "schouten bracket: two grade-2 sums of " << terms << " necklaces, length <= "
              << maxlen << "\n";

    auto t0 = std::chrono::steady_clock::now();
    PolyVector serial = schouten_serial(a, b);
    double t_serial = ms(t0);
    t0 = std::chrono::steady_clock::now();
    PolyVector parallel = schouten_parallel(a, b);
    double t_parallel = ms(t0);
    if (!(serial == parallel)) {
        std::cerr << "FAIL: kernels disagree\n";
        return 1;
    }
    std::cout << "  serial    " << t_serial << " ms\n";
    std::cout << "  parallel  " << t_parallel << " ms  (speedup "
              << (t_parallel > 0 ? t_serial / t_parallel : 0) << "x, results identical)\n";

    std::cout << "torsion sweep: gh.N on the full bounded family (L = 3)\n";
    RegularEndo N = gh_N();
    TestFamily fam = make_test_family(q, 3);
    std::cout << "  family: " << fam.derivations.size() << " derivations -> "
              << fam.derivations.size() * fam.derivations.size() << " pairs\n";
#ifdef _OPENMP
    int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    t0 = std::chrono::steady_clock::now();
    CheckOutcome serial_out = check_torsion(N, fam);
    double t_sweep1 = ms(t0);
#ifdef _OPENMP
    omp_set_num_threads(max_threads);
#endif
    t0 = std::chrono::steady_clock::now();
    CheckOutcome out = check_torsion(N, fam);
    double t_sweep = ms(t0);
    if (out.pass != serial_out.pass) {
        std::cerr << "FAIL: sweeps disagree\n";
        return 1;
    }
    std::cout << "  1 thread  " << t_sweep1 << " ms\n";
    std::cout << "  parallel  " << t_sweep << " ms  (speedup "
              << (t_sweep > 0 ? t_sweep1 / t_sweep : 0) << "x, "
              << (out.pass ? "pass" : "FAIL") << ")\n";
    return out.pass ? 0 : 1;
}
