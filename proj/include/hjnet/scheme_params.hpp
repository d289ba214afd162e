#ifndef HJNET_SCHEME_PARAMS_HPP
#define HJNET_SCHEME_PARAMS_HPP

namespace hjnet {

struct SchemeParams {
    double dx = 0.01;
    double dt = 0.025;
    double T = 1.0;
    double mu = 4.0;     // control bound; must dominate the certified bound
    int n_alpha = 0;     // > 0 switches the inner minimizations to sampling
    double tol = 1e-13;  // tie-break tolerance between branches/arcs

    int num_steps() const { return static_cast<int>(T / dt + 1e-9); }
};

} // namespace hjnet

#endif
