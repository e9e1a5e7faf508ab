#ifndef FRACTAL_FRAMES_FRACTAL_FRAMES_HPP
#define FRACTAL_FRAMES_FRACTAL_FRAMES_HPP

#include "fractal_frames/errors.hpp"
#include "fractal_frames/lattice.hpp"
#include "fractal_frames/phase.hpp"
#include "fractal_frames/triples.hpp"
#include "fractal_frames/towers.hpp"
#include "fractal_frames/fourier.hpp"
#include "fractal_frames/beurling.hpp"
#include "fractal_frames/selection.hpp"

#endif  // FRACTAL_FRAMES_FRACTAL_FRAMES_HPP
