WEAK_VALUE = """Computes the weak value <psi_f|O|psi_i> / <psi_f|psi_i> of an observable for one pair of pre- and post-selected states and prints a JSON report.

The report holds the complex weak value, its classification (in-range, anomalous-complex, anomalous-outside-range, amplifying), the Henrici departure from normality of both weak operators A = O Pi_i / |<psi_f|psi_i>|^2 and A' = Pi_f O / |<psi_f|psi_i>|^2, and the post-selection probability |<psi_f|psi_i>|^2.
With --eigen the rank-1 eigenstructure of both operators is added: the nonzero eigenvalue, whether the operator is nilpotent and, for qubits, the angle between the two eigenvectors.

States are given by their polar angle theta in [0, pi/2] and phase xi in [0, 2pi]. Qutrit observables also take alpha, chi1 and chi2 for each state. Angles accept expressions such as 5*pi/12 or 3pi/2.

Orthogonal pre- and post-selection (|<psi_f|psi_i>|^2 below the overlap floor) exits with code 2.
"""

SWEEP = """Runs a parameter sweep and writes one CSV (or JSON) table per run into the data folder.

Sweeps are described by a preset (--preset fig2) or a config file (--config my.cfg); single flags override values from the file.
The file name is <sweep-id>__<observable>__<hash>.csv where the hash is derived from the sweep parameters, so identical invocations produce identical files.

A summary is printed for every table: number of points, gaps, the fraction of amplifying points, the largest |O_w| and where it occurs, and the number of level curves for each requested level.
--list prints the tables and curve files already stored in the output folder instead of running a sweep.
"""

STATE_GRID = """state-grid: weak value and Henrici departures on a (theta_i, theta_f) grid at fixed phases.

Fields: wv_abs, wv_re, wv_im, df_A, df_Aprime, dfn_A, dfn_Aprime, numerator, alpha2_A, alpha2_Aprime, overlap_sq, class_code, amp_1, amp_1001, gap_reason.
class_code is a bitmask: 1 anomalous-complex, 2 anomalous-outside-range, 4 amplifying, 0 in-range and -1 for a gap.
Points whose post-selection overlap is below the floor are gaps: their fields are nan and gap_reason is 1.
Level curves are written next to the table for every value of 'levels', given as multiples of the largest eigenvalue modulus. 1 marks the border of amplification, 1.001 the slightly raised threshold drawn in some figures and 2 the border where the weak value is twice the largest eigenvalue.
"""

OBSERVABLE_SWEEP = """observable: the weak value of O(theta) = sin(theta)(cos(phi) X + sin(phi) Y) + cos(theta) Z for fixed real states, one curve per theta_i.

Without theta_range every curve covers the amplification window of its theta_i, the theta interval in which |O_w| >= 1.
Fields: theta, wv_abs, numerator, dfn_A, dfn_Aprime and their derivatives d_numerator, d_dfn_A, d_dfn_Aprime, the nonzero eigenvalues alpha_A, alpha_Aprime and their moduli, the eigenvector angles, the in_window mask and gap_reason.
With an explicit theta_range a theta_i orthogonal to theta_f is allowed: numerator and departures are kept, wv_abs and the eigenvalues become nan.
"""

EIGEN_SWEEP = """eigen: nonzero eigenvalue and eigenvector angle of both weak operators along theta for several theta_i.

Where the eigenvalue crosses zero the operator is nilpotent and both eigenvectors coincide.
"""

FAMILY_SWEEP = """family: extremal points of the observable family as functions of theta_i.

For every theta_i the table holds the theta of the largest |O_w|, the theta of the largest normalized Henrici departure of A and of A', their mean, the nilpotency angles of both operators, the smallest eigenvalue moduli and, for phi = pi/4 and theta_f = 0, the closed-form position of the maximum.
The largest |O_w| sits at the mean of the two departure maxima.
"""

PHASE_CURVE = """phase-curve: d_f(A_x) and |sigma_x,w|^2 along theta_f in [0, theta~_f] for given phases, where theta~_f is the post-selection angle at which |sigma_x,w|^2 = 1.

The columns tan_plus and tan_minus invert d_f back to tan(theta_f) on both branches of the quadratic; wv_sq_plus and wv_sq_minus give |sigma_x,w|^2 as a function of d_f along each branch.
The markers theta_f = 0, theta^_f (stationary point of d_f) and theta~_f are stored in the table metadata.
"""

METER = """Simulates the von Neumann measurement with a Gaussian pointer: the system couples to the meter through exp(-i gamma O P), is post-selected on psi_f, and the conditioned pointer is read out.

For every gamma of the ladder a JSON record is printed with gamma, mean_x, mean_p, success_prob and the extrapolated estimates re_est and im_est of the weak value.
The estimates extrapolate mean_x / gamma and mean_p / (2 gamma sigma_p^2) to gamma -> 0 in powers of gamma^2.
If the ratios along the ladder do not settle the couplings are too strong and the command fails with a diagnostic.
A coupling that shifts the pointer beyond a quarter of the grid half-width is rejected; increase --x-extent or lower gamma.
"""

VERIFY = """Runs the property suite: every closed-form relation against the generic matrix computation, the route equivalences of the weak value, the Henrici identities, the rank-1 structure of the weak operators, the pointer simulation, the extremum and nilpotency results of the observable family and spot checks of the figure sweeps.

Random instances come from a seeded generator; the seed is printed with the report so any failure can be replayed.
Exit code 0 means all checks passed, 3 that at least one failed. --report json prints a machine-readable report including the failing cases.
"""

EXIT_CODES = """Exit codes: 0 success, 1 usage error or invalid parameters, 2 near-orthogonal post-selection, degenerate input or a pointer shift off the grid, 3 verification failure."""

CONFIG_FILES = """Config files and presets are flat 'key = value' files. '#' starts a comment. Values may be angle expressions (pi/12, 5*pi/12, 3pi/2) or comma separated lists.
'runs_over = <key>' runs the sweep once for every value listed under that key and writes one file per run.
Environment variables: WVNN_LOG_LEVEL, WVNN_THREADS (0 = one worker per CPU), WVNN_OVERLAP_FLOOR, WVNN_CLASSIFY_TOL, WVNN_DATA_DIR and WVNN_COLOR_LOGS."""
