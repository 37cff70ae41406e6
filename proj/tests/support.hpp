#pragma once
#include "afmi/model.hpp"
#include "oracle.hpp"

inline afmi::ModelParams lib(const oracle::P& p) { return {p.alpha, p.beta, p.delta, p.epsilon, p.xi, p.k}; }
inline oracle::V arr(const afmi::State& s) { return {s(0), s(1)}; }
