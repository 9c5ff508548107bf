#ifndef HULTHEN_KG_H
#define HULTHEN_KG_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HkgStatus {
  HKG_STATUS_OK = 0,
  HKG_STATUS_NULL_POINTER = 1,
  HKG_STATUS_INVALID_ARGUMENT = 2,
  HKG_STATUS_DOMAIN = 3,
  HKG_STATUS_POLE = 4,
  HKG_STATUS_EXPONENTIAL_CASE = 5,
  HKG_STATUS_NO_K_SOLUTION = 6,
  HKG_STATUS_NO_BOUND_BRANCH = 7,
  HKG_STATUS_UNSUPPORTED = 8,
  HKG_STATUS_REFUSED = 9,
  HKG_STATUS_DIVERGENT = 10,
  HKG_STATUS_NO_EIGENVALUE = 11,
  HKG_STATUS_NO_BOUND_STATE = 12,
  HKG_STATUS_TRIVIAL_SOLUTION = 13,
  HKG_STATUS_INTERNAL = 14,
  HKG_STATUS_PANIC = 15,
} HkgStatus;

/*
 Potential parameters and units.
 */
typedef struct HkgParams HkgParams;

/*
 Energy levels computed once.
 */
typedef struct HkgSpectrum HkgSpectrum;

/*
 An eigenfunction ready for evaluation.
 */
typedef struct HkgWavefunction HkgWavefunction;

typedef struct HkgComplex {
  double re;
  double im;
} HkgComplex;

typedef struct HkgLevel {
  uint32_t n;
  struct HkgComplex e_plus;
  struct HkgComplex e_minus;
  bool valid_plus;
  bool valid_minus;
} HkgLevel;

typedef struct HkgConditions {
  bool cond_ii;
  bool cond_iii;
  bool at_least_one_level;
  /*
   n_max is meaningful only when this is set.
   */
  bool has_n_max;
  uint32_t n_max;
} HkgConditions;

typedef struct HkgPionState {
  double v0;
  double e0;
  double binding;
  double in_units_of_mass;
} HkgPionState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Natural units (hbar = c = m = 1).

 # Safety
 `out_params` must be a valid pointer to writable storage for one handle.
 */
enum HkgStatus hkg_params_new(struct HkgComplex v0,
                              struct HkgComplex q,
                              struct HkgComplex alpha,
                              struct HkgParams **out_params);

/*
 Pion units: energies in MeV, lengths in fm. Non-positive constants select
 the defaults; `mass` <= 0 selects the pion mass.

 # Safety
 `out_params` must be a valid pointer to writable storage for one handle.
 */
enum HkgStatus hkg_params_new_pion(struct HkgComplex v0,
                                   struct HkgComplex q,
                                   struct HkgComplex alpha,
                                   double mass,
                                   double hbar_c,
                                   double pion_mass,
                                   double e2,
                                   struct HkgParams **out_params);

/*
 # Safety
 `params` must come from `hkg_params_new*` and not be freed already; null is ignored.
 */
void hkg_params_free(struct HkgParams *params);

/*
 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_potential(const struct HkgParams *params, double x, struct HkgComplex *out_v);

/*
 Both closed-form roots of level n with their validation flags.

 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_energy_level(const struct HkgParams *params,
                                uint32_t n,
                                struct HkgLevel *out_level);

/*
 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_validate_level(const struct HkgParams *params,
                                  double energy,
                                  uint32_t n,
                                  bool *out_valid,
                                  double *out_residual);

/*
 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_conditions(const struct HkgParams *params,
                              uint32_t n,
                              struct HkgConditions *out_conditions);

/*
 Levels 0..=n_limit; `validated` drops levels without a valid root.

 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_spectrum_new(const struct HkgParams *params,
                                uint32_t n_limit,
                                bool validated,
                                struct HkgSpectrum **out_spectrum);

/*
 Number of levels; 0 for a null handle.

 # Safety
 `spectrum` must be null or a live handle.
 */
uintptr_t hkg_spectrum_len(const struct HkgSpectrum *spectrum);

/*
 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_spectrum_get(const struct HkgSpectrum *spectrum,
                                uintptr_t index,
                                struct HkgLevel *out_level);

/*
 # Safety
 `spectrum` must come from `hkg_spectrum_new` and not be freed already; null is ignored.
 */
void hkg_spectrum_free(struct HkgSpectrum *spectrum);

/*
 Eigenfunction of level n; root 0 is the plus root, 1 the minus root.
 Roots failing validation are refused unless `force` is set.

 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_wavefunction_new(const struct HkgParams *params,
                                    uint32_t n,
                                    uint32_t root,
                                    bool force,
                                    bool normalized,
                                    struct HkgWavefunction **out_wavefunction);

/*
 psi(x).

 # Safety
 Pointers must be valid.
 */
enum HkgStatus hkg_wavefunction_eval(const struct HkgWavefunction *wavefunction,
                                     double x,
                                     struct HkgComplex *out_psi);

/*
 # Safety
 `wavefunction` must come from `hkg_wavefunction_new` and not be freed already; null is ignored.
 */
void hkg_wavefunction_free(struct HkgWavefunction *wavefunction);

/*
 Largest nuclear charge with a bound level n, default pion constants.

 # Safety
 `out_z` must be valid.
 */
enum HkgStatus hkg_pion_critical_z(double q, uint32_t n, uint32_t *out_z);

/*
 Pionic ground state for charge z with A = 2.5 z and r0 = 1.2 fm.
 Non-positive constants select the defaults.

 # Safety
 `out_state` must be valid.
 */
enum HkgStatus hkg_pion_ground_state(uint32_t z,
                                     double q,
                                     double hbar_c,
                                     double pion_mass,
                                     double e2,
                                     struct HkgPionState *out_state);

/*
 Message of the last failed call on this thread, empty after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *hkg_last_error_message(void);

/*
 Static name of a status code.
 */
const char *hkg_status_name(enum HkgStatus status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HULTHEN_KG_H */
