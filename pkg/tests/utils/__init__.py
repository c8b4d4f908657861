# Copyright (c) LRSense contributors.
# Licensed under the MIT License.
