#pragma once

#define WGLAB_VERSION "0.1.0"
