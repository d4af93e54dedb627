short_version = '0.1.0'
version = short_version
full_version = short_version
