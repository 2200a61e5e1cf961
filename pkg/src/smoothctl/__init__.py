"""smoothctl: smooth control-waveform design for right-invariant systems
on SU(2) x SU(2) via symmetry reduction, with SU(2)/SU(3) worked examples.
"""

from .su2 import (Su2, Su2Algebra, Su3, exp_su2, conjugate, random_su2,
                  random_su3, PAULI_X, PAULI_Y, PAULI_Z, PAULIS)
from .invariants import (UnitaryPair, InvariantPoint, OrbitCylinderCoord,
                         invariants_of, deltas_of, delta_of, is_singular,
                         cylinder_coords, eig_phase_sorted)
from .reduction import (PiMatrix, SingularReduction, pi_of, pi_det,
                        adjugate_of, pi_inverse_times, control_from_reals,
                        DET_REL_FLOOR)
from .prelim import PrelimParams, shape_functions, prelim_unitary, \
    prelim_sigma, run_preliminary
from .planner import (TrajectorySpec, ValidationReport, plan_cubic, validate,
                      export_csv, DELTA_FLOOR)
from .integrate import (SystemParams, ControlSignal, StateTrace,
                        StartMismatch, integrate_pair, steer_on_quotient,
                        reduced_rhs, integrate_reduced, DEFAULT_STEP)
from .gauge import (OrbitMismatch, DegenerateSpectrum, SearchExhausted,
                    BasisNotInvariant, solve_gauge, adjoint_rotation,
                    conjugate_signal, split_singular_target, drift_rotation,
                    remove_drift)
from .systems import (SingularPoint, BoundaryPoint, single_spin_control,
                      steer_single_spin, LambdaCoords, lambda_generator,
                      lambda_dhat, lambda_coords, lambda_controls,
                      canonical_su3, random_block_unitary, steer_lambda)
from .pipeline import (DesignReport, ValidationFailure, design, design_leg,
                       fidelity, integrate_signal, signal_sigma)

__version__ = "0.1.0"
