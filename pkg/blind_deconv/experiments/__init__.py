name='experiments'
