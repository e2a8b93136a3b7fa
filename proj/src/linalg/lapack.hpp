#pragma once

// Single include point for the C interfaces of LAPACK and BLAS so the complex
// type matches std::complex<double> in every translation unit.

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif

#include <cblas.h>
#include <lapacke.h>
