#pragma once
#include "selfref/randgen.hpp"
